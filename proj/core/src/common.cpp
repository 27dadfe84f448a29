// Copyright 2026 The rlcu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <string>

#include "rlcu/common.hpp"

namespace rlcu {

int size_cap() {
  constexpr int kDefault = 10;
  constexpr int kHardLimit = 14;
  const char* env = std::getenv("RLCU_SIZE_CAP");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return kDefault;
  return static_cast<int>(std::min<long>(v, kHardLimit));
}

void check_size_cap(int n, const char* what) {
  const int cap = size_cap();
  if (n > cap) {
    throw SizeCapError(std::string(what) + ": " + std::to_string(n) +
                       " qubits exceeds the dense size cap of " + std::to_string(cap));
  }
}

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

}  // namespace rlcu
