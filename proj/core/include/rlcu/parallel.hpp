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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "rlcu/random.hpp"

namespace rlcu {

/// Shots are grouped in fixed-size chunks; chunk c is always handled by
/// worker c % workers.
inline constexpr std::size_t kShotChunk = 1024;

/// Runs `fn(shot_index, rng)` for every shot and returns the results in shot
/// order. Each shot owns the stream Rng::stream(seed, shot_index), so the
/// output is identical for any worker count.
template <typename Fn>
auto run_shots(std::size_t shots, std::uint64_t seed, int workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<Rng&>()))> {
  using Result = decltype(fn(std::size_t{}, std::declval<Rng&>()));
  std::vector<Result> out(shots);
  const std::size_t chunks = (shots + kShotChunk - 1) / kShotChunk;
  const std::size_t pool =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), chunks));

  auto work = [&](std::size_t worker, std::exception_ptr& err) {
    try {
      for (std::size_t c = worker; c < chunks; c += pool) {
        const std::size_t end = std::min(shots, (c + 1) * kShotChunk);
        for (std::size_t s = c * kShotChunk; s < end; ++s) {
          Rng rng = Rng::stream(seed, s);
          out[s] = fn(s, rng);
        }
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  std::vector<std::exception_ptr> errors(pool);
  if (pool == 1) {
    work(0, errors[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t w = 0; w < pool; ++w) threads.emplace_back(work, w, std::ref(errors[w]));
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace rlcu
