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

#include "cfhp/validation.hpp"

#include "cfhp/fully_digital.hpp"
#include "cfhp/hybrid_bcd.hpp"
#include "cfhp/metrics.hpp"
#include "cfhp/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfhp {

namespace {

double weighted_mse_sum(const SubproblemPoint& pt, const PrecoderStack& stack) {
  double total = 0.0;
  for (int u = 0; u < stack.num_users(); ++u) {
    const auto k = static_cast<std::size_t>(u);
    const CMatrix e = mse_matrix(u, pt.combiners[k], stack, pt.channels, pt.noise_power);
    total += pt.user_weights[k] * (pt.weights_mse[k] * e).trace().real();
  }
  return total;
}

double multiplier_terms(const PrecoderStack& stack, const std::vector<double>& multipliers,
                        const std::vector<double>& max_power, int skip = -1) {
  double total = 0.0;
  for (int b = 0; b < stack.num_aps(); ++b) {
    if (b == skip)
      continue;
    const auto i = static_cast<std::size_t>(b);
    total += multipliers[i] * (per_ap_power(b, stack).mw() - max_power[i]);
  }
  return total;
}

double penalty_terms(const PrecoderStack& stack, const HybridPrecoder& hybrid,
                     const std::vector<double>& penalties, int skip = -1) {
  double total = 0.0;
  for (int b = 0; b < stack.num_aps(); ++b) {
    if (b == skip)
      continue;
    for (int u = 0; u < stack.num_users(); ++u)
      total += (stack.block(b, u) - hybrid.product(b, u)).squaredNorm() /
               (2.0 * penalties[static_cast<std::size_t>(b)]);
  }
  return total;
}

PrecoderStack with_block(PrecoderStack stack, int ap, int u, const CMatrix& x) {
  stack.block(ap, u) = x;
  return stack;
}

double relative_gradient(const MatrixFunction& f, const CMatrix& point) {
  const CMatrix g = finite_diff_gradient(f, point);
  const CMatrix g0 = finite_diff_gradient(f, CMatrix::Zero(point.rows(), point.cols()));
  const double scale = g0.norm();
  return scale > 0.0 ? g.norm() / scale : g.norm();
}

} // namespace

double hybrid_lagrangian(const SubproblemPoint& pt, const HybridPrecoder& hybrid,
                         const std::vector<double>& penalties, const std::vector<double>& multipliers,
                         const std::vector<double>& max_power) {
  return weighted_mse_sum(pt, pt.stack) + penalty_terms(pt.stack, hybrid, penalties) +
         multiplier_terms(pt.stack, multipliers, max_power);
}

double fd_lagrangian(const SubproblemPoint& pt, const std::vector<double>& multipliers,
                     const std::vector<double>& max_power) {
  return weighted_mse_sum(pt, pt.stack) + multiplier_terms(pt.stack, multipliers, max_power);
}

double check_lagrangian_identity(const SubproblemPoint& pt, const HybridPrecoder& hybrid,
                            const std::vector<double>& penalties, const std::vector<double>& multipliers,
                            const std::vector<double>& max_power, const IdentityOptions& opts) {
  const PrecoderStack& f = pt.stack;
  const int nb = f.num_aps();
  const int nu = f.num_users();
  const double direct = hybrid_lagrangian(pt, hybrid, penalties, multipliers, max_power);

  const SubproblemData data = build_subproblem(pt.combiners, pt.weights_mse, f, pt.channels,
                                               pt.user_weights, QuadraticModel::kAllUsers);

  // Brute-force K and C straight from the definitions.
  const Eigen::Index n = f.user(0).rows();
  CMatrix k = CMatrix::Zero(n, n);
  MatrixSet c;
  double constant = 0.0;
  for (int u = 0; u < nu; ++u) {
    const auto i = static_cast<std::size_t>(u);
    const CMatrix& g = pt.combiners[i];
    const CMatrix& w = pt.weights_mse[i];
    const CMatrix hg = pt.channels[i].adjoint() * g;
    k += pt.user_weights[i] * hg * w * hg.adjoint();
    c.push_back(pt.user_weights[i] * hg * w);
    const CMatrix id = CMatrix::Identity(w.rows(), w.cols());
    constant += pt.user_weights[i] * (w * (id + pt.noise_power * g.adjoint() * g)).trace().real();
  }

  double worst = 0.0;
  for (int b = 0; b < nb; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    const double shift = 1.0 / (2.0 * penalties[bi]);
    double block = -multipliers[bi] * max_power[bi];
    double rest = constant;
    for (int u = 0; u < nu; ++u) {
      const auto i = data.at(b, u);
      const CMatrix fb = f.block(b, u);
      const CMatrix coupling = opts.flip_coupling_sign ? CMatrix(-data.coupling[i]) : data.coupling[i];
      block += (fb.adjoint() * data.quad[i] * fb).trace().real();
      block += 2.0 * (fb.adjoint() * coupling).trace().real();
      block -= 2.0 * (data.gain_block(b, u).adjoint() * fb).trace().real();
      block += shift * (fb - hybrid.product(b, u)).squaredNorm();
      block += multipliers[bi] * fb.squaredNorm();

      CMatrix others = f.user(u);
      others.middleRows(b * f.block_rows(), f.block_rows()).setZero();
      rest += (others.adjoint() * k * others).trace().real();
      rest -= 2.0 * (c[static_cast<std::size_t>(u)].adjoint() * others).trace().real();
    }
    rest += penalty_terms(f, hybrid, penalties, b) + multiplier_terms(f, multipliers, max_power, b);
    worst = std::max(worst, std::abs(block + rest - direct) / std::max(1.0, std::abs(direct)));
  }
  return worst;
}

double check_wsr_wmmse_equivalence(const PrecoderStack& stack, const MatrixSet& channels,
                                   double noise_power, const std::vector<double>& user_weights) {
  const SubproblemPoint pt = make_point(stack, channels, noise_power, user_weights);
  double offset = 0.0;
  for (double w : user_weights)
    offset += w * stack.num_streams();
  const double of = wmmse_objective(pt.combiners, pt.weights_mse, stack, channels, noise_power, user_weights);
  const double rate = wsr(stack, channels, noise_power, user_weights);
  return std::abs(of + offset - rate) / std::max(1.0, std::abs(rate));
}

CMatrix finite_diff_gradient(const MatrixFunction& f, const CMatrix& x, double step) {
  const double h = step > 0.0 ? step : 1e-5 * (1.0 + x.norm());
  const auto eval = [&](const CMatrix& p) {
    const double v = f(p);
    if (!std::isfinite(v))
      throw std::domain_error("finite_diff_gradient: non-finite objective at probe point");
    return v;
  };
  CMatrix grad(x.rows(), x.cols());
  CMatrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Complex orig = x(i, j);
      probe(i, j) = orig + Complex(h, 0.0);
      const double re_plus = eval(probe);
      probe(i, j) = orig - Complex(h, 0.0);
      const double re_minus = eval(probe);
      probe(i, j) = orig + Complex(0.0, h);
      const double im_plus = eval(probe);
      probe(i, j) = orig - Complex(0.0, h);
      const double im_minus = eval(probe);
      probe(i, j) = orig;
      grad(i, j) = Complex((re_plus - re_minus) / (2.0 * h), (im_plus - im_minus) / (2.0 * h));
    }
  }
  return grad;
}

SubproblemPoint make_point(const PrecoderStack& stack, const MatrixSet& channels, double noise_power,
                           const std::vector<double>& user_weights) {
  SubproblemPoint pt;
  pt.combiners = update_combiners(stack, channels, noise_power);
  pt.weights_mse = update_weights(pt.combiners, stack, channels, noise_power);
  pt.stack = stack;
  pt.channels = channels;
  pt.noise_power = noise_power;
  pt.user_weights = user_weights;
  return pt;
}

double hybrid_stationarity(const SubproblemPoint& pt_in, const HybridPrecoder& hybrid,
                           const std::vector<double>& penalties, const std::vector<double>& max_power,
                           double eps) {
  SubproblemPoint pt = pt_in;
  SubproblemData data = build_subproblem(pt.combiners, pt.weights_mse, pt.stack, pt.channels,
                                         pt.user_weights, QuadraticModel::kAllUsers);
  double worst = 0.0;
  for (int b = 0; b < pt.stack.num_aps(); ++b) {
    const auto bi = static_cast<std::size_t>(b);
    // Solve AP b alone, as one step of the Gauss-Seidel pass.
    refresh_coupling(data, pt.stack, b);
    const PowerProfile profile = ap_power_profile(b, data, hybrid, penalties[bi]);
    const MultiplierSolution sol = solve_lambda(profile, max_power[bi], eps, true);
    MatrixSet rhs;
    for (int u = 0; u < pt.stack.num_users(); ++u)
      rhs.push_back(data.target[data.at(b, u)] + hybrid.product(b, u) * profile.shift);
    const MatrixSet blocks = solve_blocks(data, b, profile, rhs, sol.value);
    for (int u = 0; u < pt.stack.num_users(); ++u)
      pt.stack.block(b, u) = blocks[static_cast<std::size_t>(u)];

    std::vector<double> lambdas(max_power.size(), 0.0);
    lambdas[bi] = sol.value;
    for (int u = 0; u < pt.stack.num_users(); ++u) {
      const MatrixFunction lag = [&](const CMatrix& x) {
        SubproblemPoint probe = pt;
        probe.stack = with_block(pt.stack, b, u, x);
        return hybrid_lagrangian(probe, hybrid, penalties, lambdas, max_power);
      };
      worst = std::max(worst, relative_gradient(lag, pt.stack.block(b, u)));
    }
  }
  return worst;
}

double fd_stationarity(const SubproblemPoint& pt_in, const std::vector<double>& max_power, double eps) {
  SubproblemPoint pt = pt_in;
  SubproblemData data = build_subproblem(pt.combiners, pt.weights_mse, pt.stack, pt.channels,
                                         pt.user_weights, QuadraticModel::kAllUsers);
  double worst = 0.0;
  for (int b = 0; b < pt.stack.num_aps(); ++b) {
    const auto bi = static_cast<std::size_t>(b);
    refresh_coupling(data, pt.stack, b);
    const MultiplierSolution sol = solve_mu(make_fd_profile(b, data), max_power[bi], eps, true);
    for (int u = 0; u < pt.stack.num_users(); ++u)
      pt.stack.block(b, u) = update_fd_block(b, u, data, sol.value);

    std::vector<double> mus(max_power.size(), 0.0);
    mus[bi] = sol.value;
    for (int u = 0; u < pt.stack.num_users(); ++u) {
      const MatrixFunction lag = [&](const CMatrix& x) {
        SubproblemPoint probe = pt;
        probe.stack = with_block(pt.stack, b, u, x);
        return fd_lagrangian(probe, mus, max_power);
      };
      worst = std::max(worst, relative_gradient(lag, pt.stack.block(b, u)));
    }
  }
  return worst;
}

} // namespace cfhp
