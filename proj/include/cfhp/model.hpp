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

#ifndef CFHP_MODEL_HPP
#define CFHP_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfhp {

/// Raised by validate_config; the message names the violated constraint.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform planar array, `width * height` elements.
struct Grid {
  int width = 1;
  int height = 1;

  [[nodiscard]] int size() const { return width * height; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Linear power in mW.
class LinearPower {
public:
  constexpr LinearPower() = default;
  explicit LinearPower(double milliwatts);

  [[nodiscard]] constexpr double mw() const { return value_; }
  friend constexpr auto operator<=>(const LinearPower&, const LinearPower&) = default;

private:
  double value_ = 0.0;
};

/// p [dBm] -> 10^(p/10) mW.
LinearPower dbm_to_linear(double dbm);

/// Default penalty choice when `penalty` is not given explicitly.
/// kSimulation: rho = 100 / N_t.  kListing: rho = N_t / 100.
enum class PenaltyRule { kSimulation, kListing };

/// Which quadratic term drives the auxiliary / fully digital precoder update.
/// kAllUsers expands the WMMSE objective exactly (the interference each user's
/// precoder causes at every receiver). kOwnUser keeps only the intended
/// user's term, which is the form whose per-AP blocks have rank N_s.
enum class QuadraticModel { kAllUsers, kOwnUser };

struct SystemConfig {
  int num_aps = 2;
  int num_users = 4;
  Grid tx_grid{8, 8};
  Grid rx_grid{2, 2};
  int num_rf_chains = 8;
  int num_streams = 2;
  int num_paths = 8;
  double noise_power = 1.0;  // mW
  double max_power_dbm = 30.0;
  std::vector<double> ap_max_power_dbm;  // optional per-AP override, size B
  std::vector<double> user_weights;      // optional, size U; empty means all 1
  std::optional<double> penalty;         // rho_b for every AP; overrides the rule
  PenaltyRule penalty_rule = PenaltyRule::kSimulation;
  double bisection_tol = 1e-6;
  double convergence_tol = 1e-4;
  int max_iters = 100;
  double antenna_spacing = 0.5;  // d / lambda
  std::uint64_t seed = 1;
  QuadraticModel quadratic_model = QuadraticModel::kAllUsers;
  // Newton polish of the multiplier inside the final bisection bracket.
  bool refine_multiplier = true;

  [[nodiscard]] int num_tx() const { return tx_grid.size(); }
  [[nodiscard]] int num_rx() const { return rx_grid.size(); }
  [[nodiscard]] int stacked_tx() const { return num_aps * num_tx(); }

  [[nodiscard]] double power_limit_mw(int ap) const;
  [[nodiscard]] double user_weight(int user) const;
  [[nodiscard]] double penalty_for(int ap) const;
  [[nodiscard]] std::vector<double> power_limits_mw() const;
  [[nodiscard]] std::vector<double> weights() const;
  [[nodiscard]] std::vector<double> penalties() const;
};

/// Returns `cfg` unchanged if every invariant holds, throws ConfigError otherwise.
SystemConfig validate_config(const SystemConfig& cfg);

/// One BCD iteration as recorded by the solvers.
struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;  // WMMSE objective, constant Tr(I) dropped
  double wsr = 0.0;        // nats
  std::vector<double> ap_power;
  std::vector<double> multipliers;
};

using IterationTrace = std::vector<IterationRecord>;

} // namespace cfhp

#endif // CFHP_MODEL_HPP
