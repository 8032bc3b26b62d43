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

#ifndef CFHP_EXPERIMENT_HPP
#define CFHP_EXPERIMENT_HPP

// Monte-Carlo sweeps, convergence traces and the oracle self-check behind the
// command line tool.

#include "cfhp/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cfhp {

enum class SweepAxis { kPowerDbm, kNumRfChains, kNumAps, kNumUsers, kNumTxAntennas };
enum class Solver { kHybrid, kFullyDigital, kZf, kMrt };

std::string to_string(SweepAxis axis);
std::string to_string(Solver solver);
SweepAxis parse_axis(const std::string& name);    // throws ConfigError
Solver parse_solver(const std::string& name);     // throws ConfigError

/// Desk-scale defaults: a 4 x 4 transmit array.
SystemConfig desk_scale_config();

struct ExperimentSpec {
  SystemConfig base = desk_scale_config();
  SweepAxis axis = SweepAxis::kPowerDbm;
  std::vector<double> values{30.0};
  std::vector<Solver> solvers{Solver::kHybrid, Solver::kFullyDigital};
  int trials = 1;
  std::string output = "results.csv";
  int workers = 1;
};

/// base with the axis set to `value`. A num_tx_antennas value must be a
/// perfect square (square array). Throws ConfigError.
SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value);

/// Checks the experiment and every swept config. Throws ConfigError.
void validate_spec(const ExperimentSpec& spec);

struct ResultRow {
  std::string axis;
  double value = 0.0;
  int trial = 0;
  std::string solver;
  double wsr_nats = 0.0;
  double wsr_bits = 0.0;
  int iters = 0;
  double max_ap_power_mw = 0.0;
  double wall_ms = 0.0;
  std::string status = "ok";
};

struct SummaryRow {
  std::string axis;
  double value = 0.0;
  std::string solver;
  int count = 0;  // rows with status ok
  double mean_wsr_bits = 0.0;
  double stderr_wsr_bits = 0.0;
  double mean_iters = 0.0;
};

/// Rows ordered by (axis value, trial, solver order in the spec) whatever
/// the worker count. Channel of trial t is sample_channel(cfg, t) with the
/// base seed, so all solvers at one point see the same channel.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Path of the aggregate file next to a results path: a.csv -> a_summary.csv.
std::string summary_path(const std::string& results_path);

struct TraceRow {
  int iteration = 0;
  std::string solver;
  double objective = 0.0;
  double wsr = 0.0;  // nats
  double max_ap_power = 0.0;
};

/// Hybrid and fully digital traces on one shared channel.
std::vector<TraceRow> run_convergence_trace(const SystemConfig& cfg, std::uint64_t trial);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

struct VerifyOptions {
  int seeds = 20;
  bool inject_coupling_sign_fault = false;
};

struct CheckRow {
  std::string check;
  std::uint64_t seed = 0;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Runs every oracle on `seeds` random instances of `cfg` (seed s uses
/// cfg.seed = s, s = 1..seeds).
std::vector<CheckRow> verify(const SystemConfig& cfg, const VerifyOptions& opts);
void write_check_table(std::ostream& os, const std::vector<CheckRow>& rows);

/// Small instance used by verify when no config is given.
SystemConfig verify_config();

} // namespace cfhp

#endif // CFHP_EXPERIMENT_HPP
