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

#ifndef CFHP_FULLY_DIGITAL_HPP
#define CFHP_FULLY_DIGITAL_HPP

// WMMSE block coordinate descent for fully digital APs. The precoder blocks
// solve (Q_{b,u} + mu_b I)^{-1} M_{b,u} with mu_b found by bisection on a
// rank-aware spectral power profile.

#include "cfhp/channel.hpp"
#include "cfhp/model.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/subproblem.hpp"

#include <vector>

namespace cfhp {

/// Smallest multiplier the search considers.
inline constexpr double kMuFloor = 1e-12;

/// Profile with right-hand side M_{b,u}, no penalty shift, and Q's
/// eigenvalues past its numerical rank set to zero.
PowerProfile make_fd_profile(int ap, const SubproblemData& data);

/// sum_u [sum_{n <= r} P(n) / (sigma(n) + mu)^2 + sum_{n > r} P(n) / mu^2].
/// Throws std::invalid_argument for mu <= 0.
double fd_power_profile(const PowerProfile& profile, double mu);

/// The mu = 0 pseudo-inverse branch: sum over the nonzero eigenvalues only.
/// Diagnostic; the solver never returns mu = 0.
double fd_power_pinv_branch(const PowerProfile& profile);

/// Bisection on (kMuFloor, sqrt(sum P / P_max)); returns kMuFloor when the
/// constraint is slack there.
MultiplierSolution solve_mu(const PowerProfile& profile, double max_power, double eps, bool refine);

/// (Q_{b,u} + mu I)^dagger M_{b,u} on the rank-truncated spectrum.
CMatrix update_fd_block(int ap, int u, const SubproblemData& data, double mu);

struct FdUpdate {
  PrecoderStack stack;
  std::vector<MultiplierSolution> multipliers;
};

/// One ascending Gauss-Seidel pass over the APs.
FdUpdate update_fd(SubproblemData& data, const PrecoderStack& stack, const std::vector<double>& max_power,
                   double eps, bool refine);

struct RankReport {
  std::vector<int> ranks;  // AP-major
  int expected = 0;
  [[nodiscard]] bool all_match() const;
};

RankReport check_block_ranks(const SubproblemData& data, int expected_rank);

struct FdResult {
  PrecoderStack precoder;
  IterationTrace trace;
  int iterations = 0;
  bool converged = false;
  double wsr = 0.0;  // nats
};

FdResult run_fd(const SystemConfig& cfg, const ChannelRealization& channel);

} // namespace cfhp

#endif // CFHP_FULLY_DIGITAL_HPP
