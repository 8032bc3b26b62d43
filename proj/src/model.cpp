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

#include "cfhp/model.hpp"

#include <cmath>
#include <sstream>

namespace cfhp {

LinearPower::LinearPower(double milliwatts) : value_(milliwatts) {
  if (!(milliwatts >= 0.0))
    throw std::invalid_argument("LinearPower: value must be >= 0");
}

LinearPower dbm_to_linear(double dbm) {
  if (!std::isfinite(dbm))
    throw std::invalid_argument("dbm_to_linear: non-finite input");
  return LinearPower(std::pow(10.0, dbm / 10.0));
}

double SystemConfig::power_limit_mw(int ap) const {
  if (!ap_max_power_dbm.empty())
    return dbm_to_linear(ap_max_power_dbm.at(static_cast<std::size_t>(ap))).mw();
  return dbm_to_linear(max_power_dbm).mw();
}

double SystemConfig::user_weight(int user) const {
  if (user_weights.empty())
    return 1.0;
  return user_weights.at(static_cast<std::size_t>(user));
}

double SystemConfig::penalty_for(int /*ap*/) const {
  if (penalty)
    return *penalty;
  const double nt = num_tx();
  return penalty_rule == PenaltyRule::kSimulation ? 100.0 / nt : nt / 100.0;
}

std::vector<double> SystemConfig::power_limits_mw() const {
  std::vector<double> out(static_cast<std::size_t>(num_aps));
  for (int b = 0; b < num_aps; ++b)
    out[static_cast<std::size_t>(b)] = power_limit_mw(b);
  return out;
}

std::vector<double> SystemConfig::weights() const {
  std::vector<double> out(static_cast<std::size_t>(num_users));
  for (int u = 0; u < num_users; ++u)
    out[static_cast<std::size_t>(u)] = user_weight(u);
  return out;
}

std::vector<double> SystemConfig::penalties() const {
  std::vector<double> out(static_cast<std::size_t>(num_aps));
  for (int b = 0; b < num_aps; ++b)
    out[static_cast<std::size_t>(b)] = penalty_for(b);
  return out;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok)
    throw ConfigError(what);
}

std::string ineq(const char* name, long lhs, const char* op, long rhs) {
  std::ostringstream os;
  os << name << " violated (" << lhs << ' ' << op << ' ' << rhs << ')';
  return os.str();
}

} // namespace

SystemConfig validate_config(const SystemConfig& cfg) {
  require(cfg.num_aps >= 1, "num_aps must be positive");
  require(cfg.num_users >= 1, "num_users must be positive");
  require(cfg.tx_grid.width >= 1 && cfg.tx_grid.height >= 1, "tx_grid dimensions must be positive");
  require(cfg.rx_grid.width >= 1 && cfg.rx_grid.height >= 1, "rx_grid dimensions must be positive");
  require(cfg.num_rf_chains >= 1, "num_rf_chains must be positive");
  require(cfg.num_streams >= 1, "num_streams must be positive");
  require(cfg.num_paths >= 1, "num_paths must be positive");
  require(cfg.max_iters >= 1, "max_iters must be positive");

  require(cfg.num_rf_chains <= cfg.num_tx(), ineq("N_RF <= N_t", cfg.num_rf_chains, ">", cfg.num_tx()));
  require(cfg.num_streams <= cfg.num_rx(), ineq("N_s <= N_r", cfg.num_streams, ">", cfg.num_rx()));
  const long streams = static_cast<long>(cfg.num_users) * cfg.num_streams;
  const long chains = static_cast<long>(cfg.num_aps) * cfg.num_rf_chains;
  require(streams <= chains, ineq("U*N_s <= B*N_RF", streams, ">", chains));

  require(std::isfinite(cfg.noise_power) && cfg.noise_power > 0.0, "noise_power must be > 0");
  require(std::isfinite(cfg.max_power_dbm), "max_power_dbm must be finite");
  require(cfg.ap_max_power_dbm.empty() ||
              cfg.ap_max_power_dbm.size() == static_cast<std::size_t>(cfg.num_aps),
          "ap_max_power_dbm must have num_aps entries");
  for (double p : cfg.ap_max_power_dbm)
    require(std::isfinite(p), "ap_max_power_dbm entries must be finite");
  require(cfg.user_weights.empty() ||
              cfg.user_weights.size() == static_cast<std::size_t>(cfg.num_users),
          "user_weights must have num_users entries");
  for (double w : cfg.user_weights)
    require(std::isfinite(w) && w > 0.0, "user weights must be > 0");
  require(!cfg.penalty || (std::isfinite(*cfg.penalty) && *cfg.penalty > 0.0), "penalty must be > 0");
  require(std::isfinite(cfg.bisection_tol) && cfg.bisection_tol > 0.0, "bisection_tol must be > 0");
  require(std::isfinite(cfg.convergence_tol) && cfg.convergence_tol > 0.0, "convergence_tol must be > 0");
  require(std::isfinite(cfg.antenna_spacing) && cfg.antenna_spacing > 0.0, "antenna_spacing must be > 0");
  return cfg;
}

} // namespace cfhp
