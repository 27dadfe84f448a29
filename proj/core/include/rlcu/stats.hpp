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

#include <cstddef>
#include <vector>

#include "rlcu/common.hpp"

namespace rlcu {

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

struct ComplexSummary {
  cplx mean{0.0, 0.0};
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error of the mean (n - 1 denominator). The sums
/// run in input order. Throws Error on empty input.
Summary summarize(const std::vector<double>& values);
ComplexSummary summarize(const std::vector<cplx>& values);

struct RatioEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
};

/// sum(num)/sum(den) with a delete-one-batch jackknife standard error over
/// `batches` contiguous batches. Throws Error if the inputs differ in length,
/// batches < 2 or batches > size.
RatioEstimate jackknife_ratio(const std::vector<double>& num, const std::vector<double>& den, std::size_t batches);

/// Least-squares slope of y against x. Throws Error for fewer than two points
/// or constant x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// |estimate - exact| / stderr. A deviation within round-off (1e-12 relative
/// to max(1, |exact|)) gives 0; a larger one with zero error gives +inf.
double z_score(double estimate, double exact, double std_error);

}  // namespace rlcu
