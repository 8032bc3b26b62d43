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

#ifndef CFHP_HYBRID_BCD_HPP
#define CFHP_HYBRID_BCD_HPP

// Penalty-based block coordinate descent for hybrid precoding.
//
// Each iteration updates, in order, the MMSE combiners G, the MSE weights W,
// the auxiliary fully digital precoders F (per-AP Gauss-Seidel with a power
// multiplier per AP), the digital precoders F_BB (least squares) and the
// analog precoders F_RF (element-wise phase alignment). A final rescaling of
// F_BB restores the per-AP power budget.

#include "cfhp/channel.hpp"
#include "cfhp/model.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/subproblem.hpp"
#include "cfhp/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace cfhp {

/// F_{b,u} = sqrt(P_b) V_{b,u}(:, 1:N_s) / sqrt(sum_u ||V_{b,u}(:, 1:N_s)||^2),
/// V_{b,u} the right singular vectors of H_{b,u}.
PrecoderStack init_auxiliary(const SystemConfig& cfg, const ChannelRealization& channel);

/// Unit-modulus entries with phases uniform on (-pi, pi], keyed by (seed, trial, AP).
std::vector<CMatrix> init_analog(const SystemConfig& cfg, std::uint64_t trial);

/// Least-squares fit pinv(F_RF,b) F_{b,u}, scaled per AP to full power.
std::vector<CMatrix> init_digital(const SystemConfig& cfg, const std::vector<CMatrix>& analog,
                                  const PrecoderStack& auxiliary);

struct AuxiliaryUpdate {
  PrecoderStack stack;
  std::vector<MultiplierSolution> multipliers;  // one per AP
};

/// Power profile of AP b for the penalized block solve with right-hand side
/// M_{b,u} + F_HB,b,u / (2 rho_b).
PowerProfile ap_power_profile(int ap, const SubproblemData& data, const HybridPrecoder& hybrid,
                              double penalty);

/// Case 1 (lambda = 0) or bisection on (0, sqrt(sum P / P_max)).
MultiplierSolution solve_lambda(const PowerProfile& profile, double max_power, double eps,
                                bool refine);

/// One Gauss-Seidel pass over the APs in ascending order. `data` is updated
/// in place so it reflects the coupling seen by the last AP.
AuxiliaryUpdate update_auxiliary(SubproblemData& data, const PrecoderStack& stack,
                                 const HybridPrecoder& hybrid, const std::vector<double>& penalties,
                                 const std::vector<double>& max_power, double eps, bool refine);

/// F_BB,b,u = pinv(F_RF,b) F_{b,u}.
std::vector<CMatrix> update_digital(const std::vector<CMatrix>& analog, const PrecoderStack& auxiliary);

/// Called after every entry update with (AP, row, column, squared residual).
using AnalogObserver = std::function<void(int, int, int, double)>;

/// One row-major sweep over every entry of every F_RF,b. An entry whose
/// alignment coefficient is exactly zero keeps its phase.
std::vector<CMatrix> update_analog(const std::vector<CMatrix>& analog, const std::vector<CMatrix>& digital,
                                   const PrecoderStack& auxiliary, const AnalogObserver& observer = {});

/// Scales F_BB,b,* by sqrt(P_b / power_b) for every AP above its budget.
HybridPrecoder finalize(HybridPrecoder hybrid, const std::vector<double>& max_power);

struct HybridResult {
  HybridPrecoder precoder;  // finalized
  PrecoderStack auxiliary;
  IterationTrace trace;     // entry 0 is the initial point
  int iterations = 0;
  bool converged = false;
  double wsr = 0.0;         // nats, finalized precoder
};

HybridResult run_hybrid(const SystemConfig& cfg, const ChannelRealization& channel);

} // namespace cfhp

#endif // CFHP_HYBRID_BCD_HPP
