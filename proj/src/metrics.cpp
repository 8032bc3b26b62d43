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

#include "cfhp/metrics.hpp"

#include "cfhp/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace cfhp {

namespace {

void check_dims(const PrecoderStack& stack, const MatrixSet& channels) {
  if (static_cast<int>(channels.size()) != stack.num_users())
    throw std::invalid_argument("channel count does not match precoder user count");
  for (const auto& h : channels)
    if (h.cols() != stack.user(0).rows())
      throw std::invalid_argument("channel width does not match stacked precoder rows");
}

void check_user(int u, const PrecoderStack& stack) {
  if (u < 0 || u >= stack.num_users())
    throw std::out_of_range("user index out of range");
}

} // namespace

CMatrix interference_plus_noise(int u, const PrecoderStack& stack, const MatrixSet& channels,
                                double noise_power) {
  check_dims(stack, channels);
  check_user(u, stack);
  const CMatrix& h = channels[static_cast<std::size_t>(u)];
  CMatrix j = noise_power * CMatrix::Identity(h.rows(), h.rows());
  for (int k = 0; k < stack.num_users(); ++k) {
    if (k == u)
      continue;
    const CMatrix hf = h * stack.user(k);
    j.noalias() += hf * hf.adjoint();
  }
  return hermitian_part(j);
}

CMatrix received_covariance(int u, const PrecoderStack& stack, const MatrixSet& channels,
                            double noise_power) {
  CMatrix j = interference_plus_noise(u, stack, channels, noise_power);
  const CMatrix hf = channels[static_cast<std::size_t>(u)] * stack.user(u);
  j.noalias() += hf * hf.adjoint();
  return hermitian_part(j);
}

double log_det_hpd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(hermitian_part(a));
  if (llt.info() != Eigen::Success)
    throw std::domain_error("log_det_hpd: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

std::vector<double> user_rates(const PrecoderStack& stack, const MatrixSet& channels,
                               double noise_power) {
  check_dims(stack, channels);
  std::vector<double> rates(static_cast<std::size_t>(stack.num_users()));
  for (int u = 0; u < stack.num_users(); ++u) {
    // log|I + J^{-1} S| = log|J + S| - log|J|
    const CMatrix j = interference_plus_noise(u, stack, channels, noise_power);
    const CMatrix hf = channels[static_cast<std::size_t>(u)] * stack.user(u);
    const CMatrix total = j + hf * hf.adjoint();
    rates[static_cast<std::size_t>(u)] = std::max(0.0, log_det_hpd(total) - log_det_hpd(j));
  }
  return rates;
}

double wsr(const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
           const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != stack.num_users())
    throw std::invalid_argument("wsr: weight count does not match user count");
  const auto rates = user_rates(stack, channels, noise_power);
  double r = 0.0;
  for (std::size_t u = 0; u < rates.size(); ++u)
    r += weights[u] * rates[u];
  return r;
}

CMatrix mse_matrix(int u, const CMatrix& combiner, const PrecoderStack& stack,
                   const MatrixSet& channels, double noise_power) {
  check_dims(stack, channels);
  check_user(u, stack);
  const CMatrix& h = channels[static_cast<std::size_t>(u)];
  if (combiner.rows() != h.rows() || combiner.cols() != stack.num_streams())
    throw std::invalid_argument("mse_matrix: combiner shape mismatch");
  const CMatrix gh = combiner.adjoint() * h;
  const Eigen::Index ns = stack.num_streams();
  const CMatrix err = gh * stack.user(u) - CMatrix::Identity(ns, ns);
  CMatrix e = err * err.adjoint() + noise_power * combiner.adjoint() * combiner;
  for (int j = 0; j < stack.num_users(); ++j) {
    if (j == u)
      continue;
    const CMatrix x = gh * stack.user(j);
    e.noalias() += x * x.adjoint();
  }
  return hermitian_part(e);
}

LinearPower per_ap_power(int ap, const PrecoderStack& stack) {
  if (ap < 0 || ap >= stack.num_aps())
    throw std::out_of_range("per_ap_power: AP index out of range");
  double p = 0.0;
  for (int u = 0; u < stack.num_users(); ++u)
    p += stack.block(ap, u).squaredNorm();
  return LinearPower(p);
}

LinearPower per_ap_power(int ap, const HybridPrecoder& hybrid) {
  if (ap < 0 || ap >= hybrid.num_aps())
    throw std::out_of_range("per_ap_power: AP index out of range");
  double p = 0.0;
  for (int u = 0; u < hybrid.num_users; ++u)
    p += hybrid.product(ap, u).squaredNorm();
  return LinearPower(p);
}

std::vector<double> ap_powers(const PrecoderStack& stack) {
  std::vector<double> out;
  for (int b = 0; b < stack.num_aps(); ++b)
    out.push_back(per_ap_power(b, stack).mw());
  return out;
}

std::vector<double> ap_powers(const HybridPrecoder& hybrid) {
  std::vector<double> out;
  for (int b = 0; b < hybrid.num_aps(); ++b)
    out.push_back(per_ap_power(b, hybrid).mw());
  return out;
}

double penalty_term(const PrecoderStack& stack, const HybridPrecoder& hybrid,
                    const std::vector<double>& penalties) {
  if (hybrid.num_aps() != stack.num_aps() || hybrid.num_users != stack.num_users() ||
      static_cast<int>(penalties.size()) != stack.num_aps())
    throw std::invalid_argument("penalty_term: dimension mismatch");
  double total = 0.0;
  for (int b = 0; b < stack.num_aps(); ++b) {
    double gap = 0.0;
    for (int u = 0; u < stack.num_users(); ++u)
      gap += (stack.block(b, u) - hybrid.product(b, u)).squaredNorm();
    total += gap / (2.0 * penalties[static_cast<std::size_t>(b)]);
  }
  return total;
}

double wmmse_objective(const MatrixSet& combiners, const MatrixSet& weights_mse,
                       const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
                       const std::vector<double>& weights) {
  const auto nu = static_cast<std::size_t>(stack.num_users());
  if (combiners.size() != nu || weights_mse.size() != nu || weights.size() != nu)
    throw std::invalid_argument("wmmse_objective: per-user input count mismatch");
  double total = 0.0;
  for (int u = 0; u < stack.num_users(); ++u) {
    const CMatrix& w = weights_mse[static_cast<std::size_t>(u)];
    if (hermitian_residual(w) > 1e-10)
      throw std::invalid_argument("wmmse_objective: weight matrix is not Hermitian");
    const CMatrix e = mse_matrix(u, combiners[static_cast<std::size_t>(u)], stack, channels, noise_power);
    double log_det_w = 0.0;
    try {
      log_det_w = log_det_hpd(w);
    } catch (const std::domain_error&) {
      throw std::invalid_argument("wmmse_objective: weight matrix is not positive definite");
    }
    total += weights[static_cast<std::size_t>(u)] * (log_det_w - (w * e).trace().real());
  }
  return total;
}

double wmmse_objective(const MatrixSet& combiners, const MatrixSet& weights_mse,
                       const PrecoderStack& stack, const HybridPrecoder& hybrid,
                       const MatrixSet& channels, double noise_power,
                       const std::vector<double>& penalties, const std::vector<double>& weights) {
  return wmmse_objective(combiners, weights_mse, stack, channels, noise_power, weights) -
         penalty_term(stack, hybrid, penalties);
}

} // namespace cfhp
