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

#include "cfhp/experiment.hpp"

#include "cfhp/baselines.hpp"
#include "cfhp/channel.hpp"
#include "cfhp/fully_digital.hpp"
#include "cfhp/hybrid_bcd.hpp"
#include "cfhp/metrics.hpp"
#include "cfhp/rng.hpp"
#include "cfhp/subproblem.hpp"
#include "cfhp/validation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace cfhp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6)
    throw ConfigError(std::string(what) + " values must be positive integers");
  return static_cast<int>(v);
}

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return s;
}

ResultRow run_one(const SystemConfig& cfg, const ChannelRealization& ch, Solver solver) {
  ResultRow row;
  row.solver = to_string(solver);
  const auto start = std::chrono::steady_clock::now();
  try {
    const MatrixSet h = ch.aggregated();
    std::vector<double> powers;
    switch (solver) {
    case Solver::kHybrid: {
      const HybridResult r = run_hybrid(cfg, ch);
      row.wsr_nats = r.wsr;
      row.iters = r.iterations;
      powers = ap_powers(r.precoder);
      break;
    }
    case Solver::kFullyDigital: {
      const FdResult r = run_fd(cfg, ch);
      row.wsr_nats = r.wsr;
      row.iters = r.iterations;
      powers = ap_powers(r.precoder);
      break;
    }
    case Solver::kZf:
    case Solver::kMrt: {
      if (cfg.num_streams != 1)
        throw std::invalid_argument("baselines require num_streams = 1");
      const CMatrix stacked = stacked_channel(ch);
      const PrecoderStack f = solver == Solver::kZf ? zf_precoder(stacked, cfg.num_aps, cfg.power_limits_mw())
                                                    : mrt_precoder(stacked, cfg.num_aps, cfg.power_limits_mw());
      row.wsr_nats = wsr(f, h, cfg.noise_power, cfg.weights());
      powers = ap_powers(f);
      break;
    }
    }
    row.wsr_bits = row.wsr_nats * kNatsToBits;
    row.max_ap_power_mw = *std::max_element(powers.begin(), powers.end());
  } catch (const std::exception& e) {
    row.wsr_nats = row.wsr_bits = row.max_ap_power_mw = kNaN;
    row.status = "error: " + sanitize(e.what());
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

} // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::kPowerDbm: return "power_dbm";
  case SweepAxis::kNumRfChains: return "num_rf_chains";
  case SweepAxis::kNumAps: return "num_aps";
  case SweepAxis::kNumUsers: return "num_users";
  case SweepAxis::kNumTxAntennas: return "num_tx_antennas";
  }
  return "unknown";
}

std::string to_string(Solver solver) {
  switch (solver) {
  case Solver::kHybrid: return "hybrid";
  case Solver::kFullyDigital: return "fully_digital";
  case Solver::kZf: return "zf";
  case Solver::kMrt: return "mrt";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::kPowerDbm, SweepAxis::kNumRfChains, SweepAxis::kNumAps, SweepAxis::kNumUsers,
                      SweepAxis::kNumTxAntennas})
    if (to_string(a) == name)
      return a;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

Solver parse_solver(const std::string& name) {
  for (Solver s : {Solver::kHybrid, Solver::kFullyDigital, Solver::kZf, Solver::kMrt})
    if (to_string(s) == name)
      return s;
  throw ConfigError("unknown solver '" + name + "'");
}

SystemConfig desk_scale_config() {
  SystemConfig cfg;
  cfg.tx_grid = {4, 4};
  return cfg;
}

SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value) {
  SystemConfig cfg = base;
  switch (axis) {
  case SweepAxis::kPowerDbm:
    if (!std::isfinite(value))
      throw ConfigError("power_dbm values must be finite");
    cfg.max_power_dbm = value;
    cfg.ap_max_power_dbm.clear();
    break;
  case SweepAxis::kNumRfChains:
    cfg.num_rf_chains = as_count(value, "num_rf_chains");
    break;
  case SweepAxis::kNumAps:
    if (!cfg.ap_max_power_dbm.empty())
      throw ConfigError("num_aps sweep cannot be combined with ap_max_power_dbm");
    cfg.num_aps = as_count(value, "num_aps");
    break;
  case SweepAxis::kNumUsers:
    if (!cfg.user_weights.empty())
      throw ConfigError("num_users sweep cannot be combined with user_weights");
    cfg.num_users = as_count(value, "num_users");
    break;
  case SweepAxis::kNumTxAntennas: {
    const int n = as_count(value, "num_tx_antennas");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
      throw ConfigError("num_tx_antennas values must be perfect squares (square array)");
    cfg.tx_grid = {side, side};
    break;
  }
  }
  return validate_config(cfg);
}

void validate_spec(const ExperimentSpec& spec) {
  validate_config(spec.base);
  if (spec.trials < 1)
    throw ConfigError("trials must be >= 1");
  if (spec.workers < 1)
    throw ConfigError("workers must be >= 1");
  if (spec.values.empty())
    throw ConfigError("experiment needs at least one axis value");
  if (spec.solvers.empty())
    throw ConfigError("experiment needs at least one solver");
  for (Solver s : spec.solvers)
    if ((s == Solver::kZf || s == Solver::kMrt) && (spec.base.num_rx() != 1 || spec.base.num_streams != 1))
      throw ConfigError(to_string(s) + " needs single-antenna users with one stream");
  for (double v : spec.values)
    apply_axis(spec.base, spec.axis, v);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const std::size_t tasks = spec.values.size() * static_cast<std::size_t>(spec.trials);
  const std::size_t per_task = spec.solvers.size();
  std::vector<ResultRow> rows(tasks * per_task);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t vi = t / static_cast<std::size_t>(spec.trials);
      const int trial = static_cast<int>(t % static_cast<std::size_t>(spec.trials));
      const double value = spec.values[vi];
      const SystemConfig cfg = apply_axis(spec.base, spec.axis, value);
      const ChannelRealization ch = sample_channel(cfg, static_cast<std::uint64_t>(trial));
      for (std::size_t s = 0; s < per_task; ++s) {
        ResultRow row = run_one(cfg, ch, spec.solvers[s]);
        row.axis = to_string(spec.axis);
        row.value = value;
        row.trial = trial;
        rows[t * per_task + s] = std::move(row);
      }
    }
  };

  const int n = std::min<int>(spec.workers, static_cast<int>(tasks));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  std::vector<double> iters;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) {
      return s.axis == r.axis && s.value == r.value && s.solver == r.solver;
    });
    if (it == out.end()) {
      out.push_back({r.axis, r.value, r.solver});
      samples.emplace_back();
      iters.push_back(0.0);
      it = out.end() - 1;
    }
    const auto k = static_cast<std::size_t>(it - out.begin());
    if (r.status != "ok")
      continue;
    samples[k].push_back(r.wsr_bits);
    iters[k] += r.iters;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& x = samples[k];
    const double n = static_cast<double>(x.size());
    out[k].count = static_cast<int>(x.size());
    if (x.empty()) {
      out[k].mean_wsr_bits = out[k].stderr_wsr_bits = out[k].mean_iters = kNaN;
      continue;
    }
    double mean = 0.0;
    for (double v : x)
      mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x)
      ss += (v - mean) * (v - mean);
    out[k].mean_wsr_bits = mean;
    // Sample standard deviation over sqrt(n); zero for a single trial.
    out[k].stderr_wsr_bits = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    out[k].mean_iters = iters[k] / n;
  }
  return out;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << std::setprecision(12);
  os << "axis,value,trial,solver,wsr_nats,wsr_bits,iters,max_ap_power_mw,wall_ms,status\n";
  for (const auto& r : rows)
    os << r.axis << ',' << r.value << ',' << r.trial << ',' << r.solver << ',' << r.wsr_nats << ','
       << r.wsr_bits << ',' << r.iters << ',' << r.max_ap_power_mw << ',' << r.wall_ms << ',' << r.status
       << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << std::setprecision(12);
  os << "axis,value,solver,count,mean_wsr_bits,stderr_wsr_bits,mean_iters\n";
  for (const auto& r : rows)
    os << r.axis << ',' << r.value << ',' << r.solver << ',' << r.count << ',' << r.mean_wsr_bits << ','
       << r.stderr_wsr_bits << ',' << r.mean_iters << '\n';
}

std::string summary_path(const std::string& results_path) {
  const auto slash = results_path.find_last_of('/');
  const auto dot = results_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return results_path + "_summary.csv";
  return results_path.substr(0, dot) + "_summary" + results_path.substr(dot);
}

std::vector<TraceRow> run_convergence_trace(const SystemConfig& cfg_in, std::uint64_t trial) {
  const SystemConfig cfg = validate_config(cfg_in);
  const ChannelRealization ch = sample_channel(cfg, trial);
  std::vector<TraceRow> rows;
  const auto append = [&](const IterationTrace& trace, const char* name) {
    for (const auto& rec : trace)
      rows.push_back({rec.iteration, name, rec.objective, rec.wsr,
                      *std::max_element(rec.ap_power.begin(), rec.ap_power.end())});
  };
  append(run_hybrid(cfg, ch).trace, "hybrid");
  append(run_fd(cfg, ch).trace, "fully_digital");
  return rows;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << std::setprecision(12);
  os << "iteration,solver,objective,wsr,max_ap_power\n";
  for (const auto& r : rows)
    os << r.iteration << ',' << r.solver << ',' << r.objective << ',' << r.wsr << ',' << r.max_ap_power << '\n';
}

SystemConfig verify_config() {
  SystemConfig cfg;
  cfg.num_aps = 2;
  cfg.num_users = 2;
  cfg.tx_grid = {2, 2};
  cfg.rx_grid = {2, 1};
  cfg.num_rf_chains = 4;
  cfg.num_streams = 2;
  cfg.num_paths = 4;
  return cfg;
}

std::vector<CheckRow> verify(const SystemConfig& cfg_in, const VerifyOptions& opts) {
  const SystemConfig base = validate_config(cfg_in);
  std::vector<CheckRow> rows;
  for (int s = 1; s <= opts.seeds; ++s) {
    SystemConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(s);
    const ChannelRealization ch = sample_channel(cfg, 0);
    const MatrixSet h = ch.aggregated();
    const auto weights = cfg.weights();
    const auto penalties = cfg.penalties();
    const auto limits = cfg.power_limits_mw();

    const PrecoderStack stack = init_auxiliary(cfg, ch);
    HybridPrecoder hybrid;
    hybrid.num_users = cfg.num_users;
    hybrid.analog = init_analog(cfg, 0);
    hybrid.digital = init_digital(cfg, hybrid.analog, stack);
    const SubproblemPoint pt = make_point(stack, h, cfg.noise_power, weights);

    auto rng = make_stream(cfg.seed, StreamTag::kTest, 0, 0, 0);
    std::vector<double> lambdas;
    for (int b = 0; b < cfg.num_aps; ++b)
      lambdas.push_back(rng.uniform01());

    const auto add = [&](const char* name, double value, double tol) {
      rows.push_back({name, cfg.seed, value, tol, std::isfinite(value) && value <= tol});
    };

    IdentityOptions p1;
    p1.flip_coupling_sign = opts.inject_coupling_sign_fault;
    add("lagrangian_identity", check_lagrangian_identity(pt, hybrid, penalties, lambdas, limits, p1), 1e-8);
    add("wsr_wmmse_equivalence", check_wsr_wmmse_equivalence(stack, h, cfg.noise_power, weights), 1e-8);

    // Spectral power profile against a direct linear solve.
    SubproblemData data =
        build_subproblem(pt.combiners, pt.weights_mse, stack, h, weights, QuadraticModel::kAllUsers);
    double worst = 0.0;
    for (int b = 0; b < cfg.num_aps; ++b) {
      const PowerProfile prof = make_fd_profile(b, data);
      for (double mu : {1e-3, 1e-1, 1.0, 10.0}) {
        double direct = 0.0;
        for (int u = 0; u < cfg.num_users; ++u) {
          const auto i = data.at(b, u);
          const CMatrix a = data.quad[i] + mu * CMatrix::Identity(data.quad[i].rows(), data.quad[i].cols());
          direct += a.ldlt().solve(data.target[i]).squaredNorm();
        }
        worst = std::max(worst, std::abs(fd_power_profile(prof, mu) - direct) / direct);
      }
    }
    add("power_profile_spectral", worst, 1e-8);

    const SubproblemData own =
        build_subproblem(pt.combiners, pt.weights_mse, stack, h, weights, QuadraticModel::kOwnUser);
    const RankReport rank = check_block_ranks(own, cfg.num_streams);
    int mismatches = 0;
    for (int r : rank.ranks)
      mismatches += r != rank.expected;
    add("block_rank", mismatches, 0.0);

    add("hybrid_stationarity", hybrid_stationarity(pt, hybrid, penalties, limits, cfg.bisection_tol), 1e-6);
    add("fd_stationarity", fd_stationarity(pt, limits, cfg.bisection_tol), 1e-6);
  }
  return rows;
}

void write_check_table(std::ostream& os, const std::vector<CheckRow>& rows) {
  os << std::setprecision(6);
  os << "check,seed,value,tolerance,result\n";
  for (const auto& r : rows)
    os << r.check << ',' << r.seed << ',' << r.value << ',' << r.tolerance << ',' << (r.pass ? "PASS" : "FAIL")
       << '\n';
}

} // namespace cfhp
