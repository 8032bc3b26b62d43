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

#ifndef CFHP_METRICS_HPP
#define CFHP_METRICS_HPP

// Objective-side quantities: interference-plus-noise covariances, the
// weighted sum rate, MSE matrices, per-AP transmit power and the penalized
// WMMSE objective that the solvers use as their convergence monitor.
//
// All rates are in nats. `channels` is the per-user aggregated channel H_u.

#include "cfhp/model.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/types.hpp"

#include <numbers>
#include <vector>

namespace cfhp {

inline constexpr double kNatsToBits = 1.0 / std::numbers::ln2;

/// J_u = sum_{j != u} H_u F_j F_j^H H_u^H + sigma^2 I.
CMatrix interference_plus_noise(int u, const PrecoderStack& stack, const MatrixSet& channels,
                                double noise_power);

/// sum_j H_u F_j F_j^H H_u^H + sigma^2 I, the matrix inverted by the MMSE combiner.
CMatrix received_covariance(int u, const PrecoderStack& stack, const MatrixSet& channels,
                            double noise_power);

/// sum_u w_u log|I + J_u^{-1} H_u F_u F_u^H H_u^H|.
double wsr(const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
           const std::vector<double>& weights);

/// Per-user rates (unweighted), nats.
std::vector<double> user_rates(const PrecoderStack& stack, const MatrixSet& channels,
                               double noise_power);

/// E_u = (G^H H_u F_u - I)(.)^H + sum_{j != u} G^H H_u F_j F_j^H H_u^H G + sigma^2 G^H G.
CMatrix mse_matrix(int u, const CMatrix& combiner, const PrecoderStack& stack,
                   const MatrixSet& channels, double noise_power);

/// sum_u ||F_{b,u}||_F^2.
LinearPower per_ap_power(int ap, const PrecoderStack& stack);
/// sum_u ||F_RF,b F_BB,b,u||_F^2.
LinearPower per_ap_power(int ap, const HybridPrecoder& hybrid);

std::vector<double> ap_powers(const PrecoderStack& stack);
std::vector<double> ap_powers(const HybridPrecoder& hybrid);

/// sum_b sum_u ||F_{b,u} - F_RF,b F_BB,b,u||_F^2 / (2 rho_b).
double penalty_term(const PrecoderStack& stack, const HybridPrecoder& hybrid,
                    const std::vector<double>& penalties);

/// log det of a Hermitian positive-definite matrix. Throws if not PD.
double log_det_hpd(const CMatrix& a);

/// sum_u w_u [log|W_u| - Tr(W_u E_u)] - penalty_term(...).
///
/// Throws std::invalid_argument if a W_u is not Hermitian (1e-10 relative) or
/// not positive definite.
double wmmse_objective(const MatrixSet& combiners, const MatrixSet& weights_mse,
                       const PrecoderStack& stack, const HybridPrecoder& hybrid,
                       const MatrixSet& channels, double noise_power,
                       const std::vector<double>& penalties, const std::vector<double>& weights);

/// Same objective without penalty terms (fully digital precoders).
double wmmse_objective(const MatrixSet& combiners, const MatrixSet& weights_mse,
                       const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
                       const std::vector<double>& weights);

} // namespace cfhp

#endif // CFHP_METRICS_HPP
