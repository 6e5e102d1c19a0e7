// Copyright 2026 The PlusDC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLUSDC_CORE_LOGSUMEXP_H_
#define PLUSDC_CORE_LOGSUMEXP_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace plusdc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// Scores in ranking order and their suffix log-sum-exps,
// tail[j] = log sum_{t >= j} exp(ranked[t]).
inline void RankedSuffix(const Eigen::VectorXd& s, std::span<const int> ranking,
                         Eigen::VectorXd* ranked, Eigen::VectorXd* tail) {
  const int m = static_cast<int>(ranking.size());
  ranked->resize(m);
  tail->resize(m);
  for (int j = 0; j < m; ++j) (*ranked)[j] = s[ranking[j]];
  double acc = kNegInf;
  for (int j = m - 1; j >= 0; --j) {
    acc = LogAddExp(acc, (*ranked)[j]);
    (*tail)[j] = acc;
  }
}

}  // namespace plusdc

#endif  // PLUSDC_CORE_LOGSUMEXP_H_
