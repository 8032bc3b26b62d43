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

#ifndef CFHP_SUBPROBLEM_HPP
#define CFHP_SUBPROBLEM_HPP

// Pieces shared by the hybrid and the fully digital solvers: the closed-form
// combiner and weight updates, the per-AP quadratic data of the precoder
// subproblem, and the Lagrange multiplier search on the per-AP power.

#include "cfhp/model.hpp"
#include "cfhp/numerics.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/types.hpp"

#include <vector>

namespace cfhp {

/// G_u = (sum_j H_u F_j F_j^H H_u^H + sigma^2 I)^{-1} H_u F_u.
MatrixSet update_combiners(const PrecoderStack& stack, const MatrixSet& channels, double noise_power);

/// W_u = E_u^{-1}. Throws std::domain_error if some E_u is singular.
MatrixSet update_weights(const MatrixSet& combiners, const PrecoderStack& stack,
                         const MatrixSet& channels, double noise_power);

/// Relative eigenvalue threshold for the numerical rank of Q_{b,u}.
inline constexpr double kRankRtol = 1e-8;

/// Quadratic data of the precoder subproblem for one BCD iteration.
///
/// With K_u the weighted quadratic matrix of user u's precoder (see
/// QuadraticModel), the objective restricted to F_u is
///   Tr(F_u^H K_u F_u) - 2 Re Tr(C_u^H F_u),   C_u = w_u H_u^H G_u W_u.
/// Splitting S_u = K_u^{1/2} into row blocks Shat_{b,u} (N_t x B N_t):
///   Q_{b,u}    = Shat_{b,u} Shat_{b,u}^H
///   Atil_{b,u} = Shat_{b,u} sum_{i != b} Shat_{i,u}^H F_{i,u}
///   M_{b,u}    = C_{b,u} - Atil_{b,u}
/// (the user weight lives inside K_u, so Q and Atil already carry it).
struct SubproblemData {
  int num_aps = 0;
  int num_users = 0;
  int block_rows = 0;
  QuadraticModel model = QuadraticModel::kAllUsers;

  MatrixSet root;  // K_u^{1/2}, per user
  MatrixSet gain;  // C_u, per user

  // AP-major (index b * U + u).
  std::vector<CMatrix> quad;
  std::vector<EigenPair<Complex>> spectra;
  std::vector<int> ranks;
  std::vector<CMatrix> coupling;
  std::vector<CMatrix> target;

  [[nodiscard]] std::size_t at(int ap, int u) const {
    return static_cast<std::size_t>(ap * num_users + u);
  }
  [[nodiscard]] auto root_block(int ap, int u) const {
    return root[static_cast<std::size_t>(u)].middleRows(ap * block_rows, block_rows);
  }
  [[nodiscard]] auto gain_block(int ap, int u) const {
    return gain[static_cast<std::size_t>(u)].middleRows(ap * block_rows, block_rows);
  }
};

/// K_u for the chosen model: w_u H_u^H G_u W_u G_u^H H_u (kOwnUser) or
/// sum_j w_j H_j^H G_j W_j G_j^H H_j (kAllUsers).
CMatrix quadratic_matrix(int u, const MatrixSet& combiners, const MatrixSet& weights_mse,
                         const MatrixSet& channels, const std::vector<double>& weights,
                         QuadraticModel model);

SubproblemData build_subproblem(const MatrixSet& combiners, const MatrixSet& weights_mse,
                                const PrecoderStack& stack, const MatrixSet& channels,
                                const std::vector<double>& weights, QuadraticModel model);

/// Recomputes Atil_{b,u} and M_{b,u} for one AP from the current precoders.
void refresh_coupling(SubproblemData& data, const PrecoderStack& stack, int ap);

/// Per-AP transmit power as a function of the multiplier x:
///   p(x) = sum_u sum_n P_u(n) / (sigma_u(n) + shift + x)^2.
/// `sigma` holds the eigenvalues of Q_{b,u}; entries past the numerical rank
/// are stored as exact zeros.
struct PowerProfile {
  std::vector<RVector> sigma;
  std::vector<RVector> numerators;
  double shift = 0.0;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double derivative(double x) const;
  /// sum_u sum_n P_u(n).
  [[nodiscard]] double numerator_sum() const;
};

/// sum_u ||U^H R_u||^2 row-wise, R_u = right-hand side of the block solve.
PowerProfile make_profile(const SubproblemData& data, int ap, const MatrixSet& rhs, double shift,
                          bool truncate_to_rank);

struct MultiplierSolution {
  double value = 0.0;
  bool searched = false;  // false: constraint inactive (value is the lower limit)
  Bisection bracket;
  double power = 0.0;     // profile at `value`
  double target = 0.0;    // P_max
};

/// Solves p(x) = target on x >= floor.
///
/// If p(floor) <= target the constraint is slack and floor is returned.
/// Otherwise bisects on (floor, sqrt(numerator_sum / target)) until the
/// bracket is narrower than `eps`. With `refine`, Newton steps from the lower
/// end of the final bracket then pin p(x) to the target within round-off;
/// without it the upper (feasible) end of the bracket is returned.
MultiplierSolution solve_multiplier(const PowerProfile& profile, double target, double floor,
                                    double eps, bool refine);

/// X_u = U diag(1 / (sigma + shift + x)) U^H R_u for each user.
MatrixSet solve_blocks(const SubproblemData& data, int ap, const PowerProfile& profile,
                       const MatrixSet& rhs, double multiplier);

} // namespace cfhp

#endif // CFHP_SUBPROBLEM_HPP
