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

#ifndef CFHP_VALIDATION_HPP
#define CFHP_VALIDATION_HPP

// Numerical oracles for the analytical claims the solvers rely on. Each
// check recomputes its quantities from first principles (MSE matrices,
// brute-force quadratic forms, finite differences) rather than reusing the
// solver's closed forms.

#include "cfhp/model.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/types.hpp"

#include <functional>
#include <vector>

namespace cfhp {

/// Operands of the precoder subproblem at one BCD iteration.
struct SubproblemPoint {
  MatrixSet combiners;
  MatrixSet weights_mse;
  PrecoderStack stack;
  MatrixSet channels;
  double noise_power = 1.0;
  std::vector<double> user_weights;
};

/// Minimization-form Lagrangian of the penalized precoder subproblem:
///   sum_u w_u Tr(W_u E_u) + sum_b ||F_b - F_HB,b||^2 / (2 rho_b)
///     + sum_b lambda_b (sum_u ||F_{b,u}||^2 - P_b).
double hybrid_lagrangian(const SubproblemPoint& pt, const HybridPrecoder& hybrid,
                         const std::vector<double>& penalties, const std::vector<double>& multipliers,
                         const std::vector<double>& max_power);

/// Same without the penalty (fully digital case).
double fd_lagrangian(const SubproblemPoint& pt, const std::vector<double>& multipliers,
                     const std::vector<double>& max_power);

struct IdentityOptions {
  bool flip_coupling_sign = false;  // mutation hook for the self-test
};

/// Max over b of the relative gap between the Lagrangian evaluated directly
/// and its AP-b block form (quadratic in F_b from the subproblem data plus
/// the F_b-independent remainder evaluated by brute force).
double check_lagrangian_identity(const SubproblemPoint& pt, const HybridPrecoder& hybrid,
                            const std::vector<double>& penalties, const std::vector<double>& multipliers,
                            const std::vector<double>& max_power, const IdentityOptions& opts = {});

/// |WMMSE objective at optimal G, W + sum_u w_u N_s - WSR| / max(1, |WSR|).
double check_wsr_wmmse_equivalence(const PrecoderStack& stack, const MatrixSet& channels,
                                   double noise_power, const std::vector<double>& user_weights);

using MatrixFunction = std::function<double(const CMatrix&)>;

/// Central differences on real and imaginary parts: returns
/// df/dRe(X) + j df/dIm(X). step <= 0 selects 1e-5 (1 + ||X||).
/// Throws std::domain_error if f is non-finite at a probe point.
CMatrix finite_diff_gradient(const MatrixFunction& f, const CMatrix& x, double step = 0.0);

/// Replays one Gauss-Seidel pass of the hybrid auxiliary update and, right
/// after each AP's solve, measures ||grad_{F_b} L|| / ||grad_{F_b} L at F_b = 0||
/// by finite differences. Returns the max over APs and users.
double hybrid_stationarity(const SubproblemPoint& pt, const HybridPrecoder& hybrid,
                           const std::vector<double>& penalties, const std::vector<double>& max_power,
                           double eps);

/// Same for the fully digital block update.
double fd_stationarity(const SubproblemPoint& pt, const std::vector<double>& max_power, double eps);

/// Assembles G and W optimal for `stack`.
SubproblemPoint make_point(const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
                           const std::vector<double>& user_weights);

} // namespace cfhp

#endif // CFHP_VALIDATION_HPP
