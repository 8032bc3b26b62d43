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

#include "cfhp/fully_digital.hpp"

#include "cfhp/hybrid_bcd.hpp"
#include "cfhp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cfhp {

PowerProfile make_fd_profile(int ap, const SubproblemData& data) {
  MatrixSet rhs;
  for (int u = 0; u < data.num_users; ++u)
    rhs.push_back(data.target[data.at(ap, u)]);
  return make_profile(data, ap, rhs, 0.0, true);
}

double fd_power_profile(const PowerProfile& profile, double mu) {
  if (!(mu > 0.0))
    throw std::invalid_argument("fd_power_profile: mu must be positive");
  return profile(mu);
}

double fd_power_pinv_branch(const PowerProfile& profile) {
  double p = 0.0;
  for (std::size_t u = 0; u < profile.sigma.size(); ++u)
    for (Eigen::Index n = 0; n < profile.sigma[u].size(); ++n)
      if (profile.sigma[u](n) > 0.0)
        p += profile.numerators[u](n) / (profile.sigma[u](n) * profile.sigma[u](n));
  return p;
}

MultiplierSolution solve_mu(const PowerProfile& profile, double max_power, double eps, bool refine) {
  return solve_multiplier(profile, max_power, kMuFloor, eps, refine);
}

CMatrix update_fd_block(int ap, int u, const SubproblemData& data, double mu) {
  const auto i = data.at(ap, u);
  const auto& eig = data.spectra[i];
  RVector sigma = eig.values;
  sigma.tail(sigma.size() - data.ranks[i]).setZero();
  const RVector scale = (sigma.array() + mu).inverse();
  return eig.vectors * (scale.asDiagonal() * (eig.vectors.adjoint() * data.target[i]));
}

FdUpdate update_fd(SubproblemData& data, const PrecoderStack& stack, const std::vector<double>& max_power,
                   double eps, bool refine) {
  FdUpdate out{stack, {}};
  for (int b = 0; b < data.num_aps; ++b) {
    refresh_coupling(data, out.stack, b);
    const PowerProfile profile = make_fd_profile(b, data);
    auto sol = solve_mu(profile, max_power[static_cast<std::size_t>(b)], eps, refine);
    for (int u = 0; u < data.num_users; ++u)
      out.stack.block(b, u) = update_fd_block(b, u, data, sol.value);
    out.multipliers.push_back(std::move(sol));
  }
  return out;
}

bool RankReport::all_match() const {
  return std::all_of(ranks.begin(), ranks.end(), [this](int r) { return r == expected; });
}

RankReport check_block_ranks(const SubproblemData& data, int expected_rank) {
  return {data.ranks, expected_rank};
}

FdResult run_fd(const SystemConfig& cfg_in, const ChannelRealization& channel) {
  const SystemConfig cfg = validate_config(cfg_in);
  const MatrixSet h = channel.aggregated();
  const auto weights = cfg.weights();
  const auto limits = cfg.power_limits_mw();
  const double noise = cfg.noise_power;

  FdResult res;
  PrecoderStack f = init_auxiliary(cfg, channel);

  const auto record = [&](int n, double objective, std::vector<double> multipliers) {
    if (!std::isfinite(objective)) {
      std::ostringstream os;
      os << "run_fd: non-finite objective at iteration " << n << " (seed " << cfg.seed << ", trial "
         << channel.trial() << ")";
      throw std::runtime_error(os.str());
    }
    res.trace.push_back({n, objective, wsr(f, h, noise, weights), ap_powers(f), std::move(multipliers)});
  };

  {
    const MatrixSet g = update_combiners(f, h, noise);
    const MatrixSet w = update_weights(g, f, h, noise);
    record(0, wmmse_objective(g, w, f, h, noise, weights), {});
  }

  for (int n = 1; n <= cfg.max_iters; ++n) {
    const MatrixSet g = update_combiners(f, h, noise);
    const MatrixSet w = update_weights(g, f, h, noise);
    SubproblemData data = build_subproblem(g, w, f, h, weights, cfg.quadratic_model);
    FdUpdate upd = update_fd(data, f, limits, cfg.bisection_tol, cfg.refine_multiplier);
    f = std::move(upd.stack);

    std::vector<double> mus;
    for (const auto& m : upd.multipliers)
      mus.push_back(m.value);
    const double prev = res.trace.back().objective;
    record(n, wmmse_objective(g, w, f, h, noise, weights), std::move(mus));
    res.iterations = n;
    if (std::abs(res.trace.back().objective - prev) < cfg.convergence_tol) {
      res.converged = true;
      break;
    }
  }

  res.precoder = std::move(f);
  res.wsr = wsr(res.precoder, h, noise, weights);
  return res;
}

} // namespace cfhp
