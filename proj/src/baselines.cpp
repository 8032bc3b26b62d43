// SPDX-License-Identifier: Apache-2.0
//
// cfhp - hybrid and fully digital precoding for cell-free mmWave MIMO
// Copyright (C) 2026 The cfhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfhp/baselines.hpp"

#include "cfhp/metrics.hpp"
#include "cfhp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfhp {

namespace {

PrecoderStack scaled_stack(const CMatrix& directions, int num_aps, const std::vector<double>& max_power) {
  if (static_cast<int>(max_power.size()) != num_aps)
    throw std::invalid_argument("baseline: one power budget per AP required");
  MatrixSet users;
  for (Eigen::Index u = 0; u < directions.cols(); ++u)
    users.emplace_back(directions.col(u).normalized());
  PrecoderStack stack(num_aps, std::move(users));
  double s = std::numeric_limits<double>::infinity();
  for (int b = 0; b < num_aps; ++b) {
    const double p = per_ap_power(b, stack).mw();
    if (p > 0.0)
      s = std::min(s, std::sqrt(max_power[static_cast<std::size_t>(b)] / p));
  }
  for (int u = 0; u < stack.num_users(); ++u)
    stack.user(u) *= s;
  return stack;
}

} // namespace

CMatrix stacked_channel(const ChannelRealization& channel) {
  const MatrixSet h = channel.aggregated();
  if (h.empty() || h.front().rows() != 1)
    throw std::invalid_argument("stacked_channel: baselines require single-antenna users");
  CMatrix out(static_cast<Eigen::Index>(h.size()), h.front().cols());
  for (std::size_t u = 0; u < h.size(); ++u)
    out.row(static_cast<Eigen::Index>(u)) = h[u];
  return out;
}

PrecoderStack mrt_precoder(const CMatrix& stacked, int num_aps, const std::vector<double>& max_power) {
  for (Eigen::Index u = 0; u < stacked.rows(); ++u)
    if (stacked.row(u).squaredNorm() == 0.0)
      throw std::domain_error("mrt_precoder: zero channel row");
  return scaled_stack(stacked.adjoint(), num_aps, max_power);
}

PrecoderStack zf_precoder(const CMatrix& stacked, int num_aps, const std::vector<double>& max_power) {
  if (stacked.rows() > stacked.cols())
    throw std::domain_error("zf_precoder: more users than transmit antennas");
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 1e-10 * s(0))
    throw std::domain_error("zf_precoder: stacked channel is rank deficient");
  const CMatrix gram = stacked * stacked.adjoint();
  const CMatrix dirs = stacked.adjoint() * gram.ldlt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
  return scaled_stack(dirs, num_aps, max_power);
}

} // namespace cfhp
