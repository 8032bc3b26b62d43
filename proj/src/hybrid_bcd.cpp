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

#include "cfhp/hybrid_bcd.hpp"

#include "cfhp/metrics.hpp"
#include "cfhp/numerics.hpp"
#include "cfhp/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cfhp {

namespace {

MatrixSet penalized_rhs(int ap, const SubproblemData& data, const HybridPrecoder& hybrid, double penalty) {
  MatrixSet rhs;
  for (int u = 0; u < data.num_users; ++u)
    rhs.push_back(data.target[data.at(ap, u)] + hybrid.product(ap, u) / (2.0 * penalty));
  return rhs;
}

void scale_to_budget(std::vector<CMatrix>& digital, const std::vector<CMatrix>& analog, int ap,
                     int num_users, double budget, bool only_if_above) {
  double power = 0.0;
  for (int u = 0; u < num_users; ++u)
    power += (analog[static_cast<std::size_t>(ap)] * digital[static_cast<std::size_t>(ap * num_users + u)])
                 .squaredNorm();
  if (power <= 0.0 || (only_if_above && power <= budget))
    return;
  const double s = std::sqrt(budget / power);
  for (int u = 0; u < num_users; ++u)
    digital[static_cast<std::size_t>(ap * num_users + u)] *= s;
}

} // namespace

PrecoderStack init_auxiliary(const SystemConfig& cfg, const ChannelRealization& channel) {
  const int nt = cfg.num_tx();
  auto stack = PrecoderStack::zeros(cfg.num_aps, nt, cfg.num_users, cfg.num_streams);
  for (int b = 0; b < cfg.num_aps; ++b) {
    double norm2 = 0.0;
    for (int u = 0; u < cfg.num_users; ++u) {
      Eigen::JacobiSVD<CMatrix> svd(channel.link(b, u), Eigen::ComputeFullV);
      stack.block(b, u) = svd.matrixV().leftCols(cfg.num_streams);
      norm2 += stack.block(b, u).squaredNorm();
    }
    const double s = std::sqrt(cfg.power_limit_mw(b) / norm2);
    for (int u = 0; u < cfg.num_users; ++u)
      stack.block(b, u) *= s;
  }
  return stack;
}

std::vector<CMatrix> init_analog(const SystemConfig& cfg, std::uint64_t trial) {
  std::vector<CMatrix> out;
  for (int b = 0; b < cfg.num_aps; ++b) {
    auto rng = make_stream(cfg.seed, StreamTag::kAnalog, trial, static_cast<std::uint64_t>(b), 0);
    CMatrix f(cfg.num_tx(), cfg.num_rf_chains);
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      for (Eigen::Index j = 0; j < f.cols(); ++j)
        f(i, j) = std::polar(1.0, rng.uniform_left_open(-std::numbers::pi, std::numbers::pi));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<CMatrix> init_digital(const SystemConfig& cfg, const std::vector<CMatrix>& analog,
                                  const PrecoderStack& auxiliary) {
  auto digital = update_digital(analog, auxiliary);
  for (int b = 0; b < cfg.num_aps; ++b)
    scale_to_budget(digital, analog, b, cfg.num_users, cfg.power_limit_mw(b), false);
  return digital;
}

PowerProfile ap_power_profile(int ap, const SubproblemData& data, const HybridPrecoder& hybrid,
                              double penalty) {
  return make_profile(data, ap, penalized_rhs(ap, data, hybrid, penalty), 1.0 / (2.0 * penalty), false);
}

MultiplierSolution solve_lambda(const PowerProfile& profile, double max_power, double eps, bool refine) {
  return solve_multiplier(profile, max_power, 0.0, eps, refine);
}

AuxiliaryUpdate update_auxiliary(SubproblemData& data, const PrecoderStack& stack,
                                 const HybridPrecoder& hybrid, const std::vector<double>& penalties,
                                 const std::vector<double>& max_power, double eps, bool refine) {
  AuxiliaryUpdate out{stack, {}};
  for (int b = 0; b < data.num_aps; ++b) {
    const double rho = penalties[static_cast<std::size_t>(b)];
    refresh_coupling(data, out.stack, b);
    const MatrixSet rhs = penalized_rhs(b, data, hybrid, rho);
    const PowerProfile profile = make_profile(data, b, rhs, 1.0 / (2.0 * rho), false);
    auto sol = solve_lambda(profile, max_power[static_cast<std::size_t>(b)], eps, refine);
    const MatrixSet blocks = solve_blocks(data, b, profile, rhs, sol.value);
    for (int u = 0; u < data.num_users; ++u)
      out.stack.block(b, u) = blocks[static_cast<std::size_t>(u)];
    out.multipliers.push_back(std::move(sol));
  }
  return out;
}

std::vector<CMatrix> update_digital(const std::vector<CMatrix>& analog, const PrecoderStack& auxiliary) {
  std::vector<CMatrix> digital;
  for (int b = 0; b < auxiliary.num_aps(); ++b) {
    const CMatrix p = pinv(analog[static_cast<std::size_t>(b)]);
    for (int u = 0; u < auxiliary.num_users(); ++u)
      digital.push_back(p * auxiliary.block(b, u));
  }
  return digital;
}

std::vector<CMatrix> update_analog(const std::vector<CMatrix>& analog, const std::vector<CMatrix>& digital,
                                   const PrecoderStack& auxiliary, const AnalogObserver& observer) {
  const int nu = auxiliary.num_users();
  const int ns = auxiliary.num_streams();
  std::vector<CMatrix> out = analog;
  for (int b = 0; b < auxiliary.num_aps(); ++b) {
    CMatrix& rf = out[static_cast<std::size_t>(b)];
    // Fbar_b = [F_{b,1} .. F_{b,U}], Fbar_BB,b likewise.
    CMatrix fbar(rf.rows(), nu * ns);
    CMatrix bbar(rf.cols(), nu * ns);
    for (int u = 0; u < nu; ++u) {
      fbar.middleCols(u * ns, ns) = auxiliary.block(b, u);
      bbar.middleCols(u * ns, ns) = digital[static_cast<std::size_t>(b * nu + u)];
    }
    CMatrix resid = fbar - rf * bbar;
    for (Eigen::Index i = 0; i < rf.rows(); ++i) {
      for (Eigen::Index j = 0; j < rf.cols(); ++j) {
        // Residual of row i with column j's contribution added back.
        const CVector partial = (resid.row(i) + rf(i, j) * bbar.row(j)).transpose();
        // sum_k partial(k) conj(bbar(j, k)); the best unit-modulus entry has its phase.
        const Complex align = bbar.row(j).transpose().dot(partial);
        if (align != Complex(0.0, 0.0))
          rf(i, j) = std::polar(1.0, std::arg(align));
        resid.row(i) = partial.transpose() - rf(i, j) * bbar.row(j);
        if (observer)
          observer(b, static_cast<int>(i), static_cast<int>(j), resid.squaredNorm());
      }
    }
  }
  return out;
}

HybridPrecoder finalize(HybridPrecoder hybrid, const std::vector<double>& max_power) {
  for (int b = 0; b < hybrid.num_aps(); ++b)
    scale_to_budget(hybrid.digital, hybrid.analog, b, hybrid.num_users, max_power[static_cast<std::size_t>(b)],
                    true);
  return hybrid;
}

HybridResult run_hybrid(const SystemConfig& cfg_in, const ChannelRealization& channel) {
  const SystemConfig cfg = validate_config(cfg_in);
  const MatrixSet h = channel.aggregated();
  const auto weights = cfg.weights();
  const auto penalties = cfg.penalties();
  const auto limits = cfg.power_limits_mw();
  const double noise = cfg.noise_power;

  HybridResult res;
  PrecoderStack aux = init_auxiliary(cfg, channel);
  HybridPrecoder hybrid;
  hybrid.num_users = cfg.num_users;
  hybrid.analog = init_analog(cfg, channel.trial());
  hybrid.digital = init_digital(cfg, hybrid.analog, aux);

  const auto record = [&](int n, double objective, std::vector<double> multipliers) {
    if (!std::isfinite(objective)) {
      std::ostringstream os;
      os << "run_hybrid: non-finite objective at iteration " << n << " (seed " << cfg.seed << ", trial "
         << channel.trial() << ")";
      throw std::runtime_error(os.str());
    }
    res.trace.push_back({n, objective, wsr(hybrid.to_stack(), h, noise, weights), ap_powers(hybrid),
                         std::move(multipliers)});
  };

  {
    const MatrixSet g = update_combiners(aux, h, noise);
    const MatrixSet w = update_weights(g, aux, h, noise);
    record(0, wmmse_objective(g, w, aux, hybrid, h, noise, penalties, weights), {});
  }

  for (int n = 1; n <= cfg.max_iters; ++n) {
    const MatrixSet g = update_combiners(aux, h, noise);
    const MatrixSet w = update_weights(g, aux, h, noise);
    SubproblemData data = build_subproblem(g, w, aux, h, weights, cfg.quadratic_model);
    AuxiliaryUpdate upd =
        update_auxiliary(data, aux, hybrid, penalties, limits, cfg.bisection_tol, cfg.refine_multiplier);
    aux = std::move(upd.stack);
    hybrid.digital = update_digital(hybrid.analog, aux);
    hybrid.analog = update_analog(hybrid.analog, hybrid.digital, aux);

    std::vector<double> lambdas;
    for (const auto& m : upd.multipliers)
      lambdas.push_back(m.value);
    const double prev = res.trace.back().objective;
    record(n, wmmse_objective(g, w, aux, hybrid, h, noise, penalties, weights), std::move(lambdas));
    res.iterations = n;
    if (std::abs(res.trace.back().objective - prev) < cfg.convergence_tol) {
      res.converged = true;
      break;
    }
  }

  res.precoder = finalize(std::move(hybrid), limits);
  res.auxiliary = std::move(aux);
  res.wsr = wsr(res.precoder.to_stack(), h, noise, weights);
  return res;
}

} // namespace cfhp
