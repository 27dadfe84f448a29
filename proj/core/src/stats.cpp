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

#include "rlcu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlcu {

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw Error("summarize: empty input");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  Summary s;
  s.mean = mean;
  s.count = values.size();
  s.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return s;
}

ComplexSummary summarize(const std::vector<cplx>& values) {
  if (values.empty()) throw Error("summarize: empty input");
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(values.size());
  im.reserve(values.size());
  for (const cplx& v : values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  const Summary r = summarize(re);
  const Summary i = summarize(im);
  return {cplx(r.mean, i.mean), r.std_error, i.std_error, values.size()};
}

RatioEstimate jackknife_ratio(const std::vector<double>& num, const std::vector<double>& den, std::size_t batches) {
  if (num.size() != den.size()) throw Error("jackknife_ratio: length mismatch");
  if (batches < 2 || batches > num.size()) throw Error("jackknife_ratio: batch count out of range");
  const std::size_t size = num.size() / batches;
  std::vector<double> bn(batches, 0.0);
  std::vector<double> bd(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = b * size;
    const std::size_t end = b + 1 == batches ? num.size() : begin + size;
    for (std::size_t i = begin; i < end; ++i) {
      bn[b] += num[i];
      bd[b] += den[i];
    }
  }
  double tn = 0.0;
  double td = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    tn += bn[b];
    td += bd[b];
  }
  RatioEstimate out;
  out.ratio = tn / td;
  std::vector<double> loo(batches);
  double mean = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    loo[b] = (tn - bn[b]) / (td - bd[b]);
    mean += loo[b];
  }
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double r : loo) ss += (r - mean) * (r - mean);
  const double k = static_cast<double>(batches);
  out.std_error = std::sqrt((k - 1.0) / k * ss);
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit_slope: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("fit_slope: x values are constant");
  return sxy / sxx;
}

double z_score(double estimate, double exact, double std_error) {
  const double dev = std::abs(estimate - exact);
  if (dev <= 1e-12 * std::max(1.0, std::abs(exact))) return 0.0;
  return std_error > 0.0 ? dev / std_error : std::numeric_limits<double>::infinity();
}

}  // namespace rlcu
