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

#include "cfhp/subproblem.hpp"

#include "cfhp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfhp {

MatrixSet update_combiners(const PrecoderStack& stack, const MatrixSet& channels, double noise_power) {
  MatrixSet out;
  out.reserve(channels.size());
  for (int u = 0; u < stack.num_users(); ++u) {
    const CMatrix cov = received_covariance(u, stack, channels, noise_power);
    const CMatrix hf = channels[static_cast<std::size_t>(u)] * stack.user(u);
    Eigen::LLT<CMatrix> llt(cov);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("update_combiners: received covariance is not positive definite");
    out.push_back(llt.solve(hf));
  }
  return out;
}

MatrixSet update_weights(const MatrixSet& combiners, const PrecoderStack& stack,
                         const MatrixSet& channels, double noise_power) {
  MatrixSet out;
  out.reserve(combiners.size());
  for (int u = 0; u < stack.num_users(); ++u) {
    const CMatrix e = mse_matrix(u, combiners[static_cast<std::size_t>(u)], stack, channels, noise_power);
    Eigen::LLT<CMatrix> llt(e);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("update_weights: MSE matrix is singular");
    const CMatrix w = llt.solve(CMatrix::Identity(e.rows(), e.cols()));
    out.push_back(hermitian_part(w));
  }
  return out;
}

CMatrix quadratic_matrix(int u, const MatrixSet& combiners, const MatrixSet& weights_mse,
                         const MatrixSet& channels, const std::vector<double>& weights,
                         QuadraticModel model) {
  const auto term = [&](std::size_t j) -> CMatrix {
    const CMatrix hg = channels[j].adjoint() * combiners[j];
    return weights[j] * hg * weights_mse[j] * hg.adjoint();
  };
  const auto nu = channels.size();
  if (combiners.size() != nu || weights_mse.size() != nu || weights.size() != nu)
    throw std::invalid_argument("quadratic_matrix: per-user input count mismatch");
  if (model == QuadraticModel::kOwnUser)
    return hermitian_part(term(static_cast<std::size_t>(u)));
  CMatrix k = CMatrix::Zero(channels.front().cols(), channels.front().cols());
  for (std::size_t j = 0; j < nu; ++j)
    k += term(j);
  return hermitian_part(k);
}

SubproblemData build_subproblem(const MatrixSet& combiners, const MatrixSet& weights_mse,
                                const PrecoderStack& stack, const MatrixSet& channels,
                                const std::vector<double>& weights, QuadraticModel model) {
  SubproblemData d;
  d.num_aps = stack.num_aps();
  d.num_users = stack.num_users();
  d.block_rows = stack.block_rows();
  d.model = model;
  const auto nu = static_cast<std::size_t>(d.num_users);
  const auto slots = static_cast<std::size_t>(d.num_aps) * nu;

  if (model == QuadraticModel::kAllUsers) {
    // K is shared, so one root and one spectrum per AP serve every user.
    const CMatrix root = psd_sqrt(quadratic_matrix(0, combiners, weights_mse, channels, weights, model));
    d.root.assign(nu, root);
  } else {
    for (int u = 0; u < d.num_users; ++u)
      d.root.push_back(psd_sqrt(quadratic_matrix(u, combiners, weights_mse, channels, weights, model)));
  }
  for (std::size_t u = 0; u < nu; ++u)
    d.gain.push_back(weights[u] * channels[u].adjoint() * combiners[u] * weights_mse[u]);

  d.quad.resize(slots);
  d.spectra.resize(slots);
  d.ranks.resize(slots);
  d.coupling.resize(slots);
  d.target.resize(slots);
  for (int b = 0; b < d.num_aps; ++b) {
    for (int u = 0; u < d.num_users; ++u) {
      const auto i = d.at(b, u);
      if (model == QuadraticModel::kAllUsers && u > 0) {
        const auto first = d.at(b, 0);
        d.quad[i] = d.quad[first];
        d.spectra[i] = d.spectra[first];
        d.ranks[i] = d.ranks[first];
        continue;
      }
      const auto s = d.root_block(b, u);
      d.quad[i] = hermitian_part(s * s.adjoint());
      d.spectra[i] = hermitian_eig(d.quad[i]);
      d.ranks[i] = numerical_rank(d.spectra[i].values, kRankRtol);
    }
    refresh_coupling(d, stack, b);
  }
  return d;
}

void refresh_coupling(SubproblemData& data, const PrecoderStack& stack, int ap) {
  if (ap < 0 || ap >= data.num_aps)
    throw std::out_of_range("refresh_coupling: AP index out of range");
  for (int u = 0; u < data.num_users; ++u) {
    const auto i = data.at(ap, u);
    const auto s = data.root_block(ap, u);
    // S is Hermitian, so sum_{i != b} Shat_i^H F_i = S F - Shat_b^H F_b.
    const CMatrix others = data.root[static_cast<std::size_t>(u)] * stack.user(u) -
                           s.adjoint() * stack.block(ap, u);
    data.coupling[i] = s * others;
    data.target[i] = data.gain_block(ap, u) - data.coupling[i];
  }
}

// Zero numerators contribute nothing even where the denominator underflows.
double PowerProfile::operator()(double x) const {
  double p = 0.0;
  for (std::size_t u = 0; u < sigma.size(); ++u)
    p += (numerators[u].array() > 0.0)
             .select(numerators[u].array() / (sigma[u].array() + shift + x).square(), 0.0)
             .sum();
  return p;
}

double PowerProfile::derivative(double x) const {
  double d = 0.0;
  for (std::size_t u = 0; u < sigma.size(); ++u)
    d -= 2.0 * (numerators[u].array() > 0.0)
                   .select(numerators[u].array() / (sigma[u].array() + shift + x).cube(), 0.0)
                   .sum();
  return d;
}

double PowerProfile::numerator_sum() const {
  double s = 0.0;
  for (const auto& n : numerators)
    s += n.sum();
  return s;
}

PowerProfile make_profile(const SubproblemData& data, int ap, const MatrixSet& rhs, double shift,
                          bool truncate_to_rank) {
  PowerProfile p;
  p.shift = shift;
  for (int u = 0; u < data.num_users; ++u) {
    const auto i = data.at(ap, u);
    const auto& eig = data.spectra[i];
    RVector sigma = eig.values;
    if (truncate_to_rank)
      sigma.tail(sigma.size() - data.ranks[i]).setZero();
    p.sigma.push_back(std::move(sigma));
    p.numerators.push_back((eig.vectors.adjoint() * rhs[static_cast<std::size_t>(u)]).rowwise().squaredNorm());
  }
  return p;
}

MultiplierSolution solve_multiplier(const PowerProfile& profile, double target, double floor,
                                    double eps, bool refine) {
  MultiplierSolution sol;
  sol.target = target;
  const double p0 = profile(floor);
  if (p0 <= target) {
    sol.value = floor;
    sol.power = p0;
    return sol;
  }
  sol.searched = true;
  // p(x) <= numerator_sum / x^2 for every x > 0.
  const double ub = std::max(floor, std::sqrt(profile.numerator_sum() / target));
  sol.bracket = bisect_decreasing(profile, target, floor, ub, eps);
  sol.value = sol.bracket.upper;

  if (refine) {
    // p is convex and decreasing, so Newton from the left end stays left of
    // the root and approaches it monotonically.
    double x = sol.bracket.lower;
    for (int k = 0; k < 60; ++k) {
      const double f = profile(x) - target;
      if (f <= 0.0)
        break;
      const double slope = profile.derivative(x);
      if (!(slope < 0.0))
        break;
      const double next = x - f / slope;
      if (!(next > x) || next > sol.bracket.upper)
        break;
      x = next;
    }
    if (profile(x) - target <= 1e-12 * target)
      sol.value = x;
  }
  sol.power = profile(sol.value);
  return sol;
}

MatrixSet solve_blocks(const SubproblemData& data, int ap, const PowerProfile& profile,
                       const MatrixSet& rhs, double multiplier) {
  MatrixSet out;
  out.reserve(rhs.size());
  for (int u = 0; u < data.num_users; ++u) {
    const auto& eig = data.spectra[data.at(ap, u)];
    const RVector scale =
        (profile.sigma[static_cast<std::size_t>(u)].array() + profile.shift + multiplier).inverse();
    out.push_back(eig.vectors * (scale.asDiagonal() * (eig.vectors.adjoint() * rhs[static_cast<std::size_t>(u)])));
  }
  return out;
}

} // namespace cfhp
