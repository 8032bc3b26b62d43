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

#include "cfhp/config_io.hpp"
#include "cfhp/experiment.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace cfhp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.base.num_aps = 2;
  spec.base.num_users = 2;
  spec.base.tx_grid = {2, 2};
  spec.base.rx_grid = {2, 1};
  spec.base.num_rf_chains = 2;
  spec.base.num_paths = 4;
  spec.base.max_iters = 15;
  spec.values = {10.0, 20.0};
  spec.trials = 2;
  return spec;
}

std::string csv_without_wall(const std::vector<ResultRow>& rows) {
  std::vector<ResultRow> copy = rows;
  for (auto& r : copy)
    r.wall_ms = 0.0;
  std::ostringstream os;
  write_results_csv(os, copy);
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CFHP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cfhp_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("config JSON round trip", "[config]") {
  ExperimentSpec spec = tiny_spec();
  spec.base.penalty = 0.25;
  spec.base.user_weights = {1.0, 2.0};
  spec.base.quadratic_model = QuadraticModel::kOwnUser;
  spec.axis = SweepAxis::kNumRfChains;
  spec.values = {2.0, 4.0};
  spec.solvers = {Solver::kFullyDigital, Solver::kHybrid};
  spec.output = "x.csv";
  const ExperimentSpec back = parse_experiment(to_json(spec));
  CHECK(to_json(back) == to_json(spec));
  CHECK(back.base.penalty.value() == 0.25);
  CHECK(back.base.tx_grid == Grid{2, 2});
  CHECK(back.axis == SweepAxis::kNumRfChains);
  CHECK(back.solvers.front() == Solver::kFullyDigital);
}

TEST_CASE("config parsing applies overrides on top of defaults", "[config]") {
  const SystemConfig cfg = parse_system_config(R"({"num_aps": 3, "max_power_dbm": 20, "tx_grid": [4, 2]})");
  CHECK(cfg.num_aps == 3);
  CHECK(cfg.max_power_dbm == 20.0);
  CHECK(cfg.num_users == desk_scale_config().num_users);
  CHECK_FALSE(parse_system_config(R"({"penalty": null})").penalty.has_value());
}

TEST_CASE("bad configs are rejected", "[config]") {
  CHECK_THROWS_AS(parse_system_config(R"({"num_apps": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_system_config(R"({"num_aps": "three"})"), ConfigError);
  CHECK_THROWS_AS(parse_system_config(R"({"tx_grid": [4]})"), ConfigError);
  CHECK_THROWS_AS(parse_system_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_system_config(R"({"quadratic_model": "both"})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"experiment": {"axis": "bandwidth"}})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"experiment": {"solvers": ["magic"]}})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment(R"({"experiment": {"colour": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment("[1, 2]"), ConfigError);
}

TEST_CASE("axis application", "[experiment]") {
  const SystemConfig base = desk_scale_config();
  CHECK(apply_axis(base, SweepAxis::kPowerDbm, 12.0).max_power_dbm == 12.0);
  CHECK(apply_axis(base, SweepAxis::kNumAps, 6.0).num_aps == 6);
  CHECK(apply_axis(base, SweepAxis::kNumTxAntennas, 36.0).tx_grid == Grid{6, 6});
  CHECK_THROWS_AS(apply_axis(base, SweepAxis::kNumTxAntennas, 32.0), ConfigError);
  CHECK_THROWS_AS(apply_axis(base, SweepAxis::kNumAps, 2.5), ConfigError);
  for (auto a : {SweepAxis::kPowerDbm, SweepAxis::kNumRfChains, SweepAxis::kNumAps, SweepAxis::kNumUsers,
                 SweepAxis::kNumTxAntennas})
    CHECK(parse_axis(to_string(a)) == a);
  for (auto s : {Solver::kHybrid, Solver::kFullyDigital, Solver::kZf, Solver::kMrt})
    CHECK(parse_solver(to_string(s)) == s);
}

TEST_CASE("experiment validation", "[experiment]") {
  ExperimentSpec spec = tiny_spec();
  validate_spec(spec);
  spec.trials = 0;
  CHECK_THROWS_AS(validate_spec(spec), ConfigError);
  spec = tiny_spec();
  spec.solvers = {Solver::kZf};  // ZF needs single-antenna users
  CHECK_THROWS_AS(validate_spec(spec), ConfigError);
  spec = tiny_spec();
  spec.axis = SweepAxis::kNumRfChains;
  spec.values = {0.0};
  CHECK_THROWS_AS(validate_spec(spec), ConfigError);
}

TEST_CASE("sweeps are deterministic and independent of the worker count", "[experiment]") {
  ExperimentSpec spec = tiny_spec();
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  spec.workers = 2;
  const auto c = run_experiment(spec);
  REQUIRE(a.size() == 2 * 2 * 2);
  CHECK(csv_without_wall(a) == csv_without_wall(b));
  CHECK(csv_without_wall(a) == csv_without_wall(c));
  for (const auto& r : a) {
    CHECK(r.status == "ok");
    CHECK_THAT(r.wsr_bits, WithinRel(r.wsr_nats / std::log(2.0), 1e-12));
    CHECK(r.max_ap_power_mw <= std::pow(10.0, r.value / 10.0) * (1.0 + 1e-9));
  }
  CHECK(a[0].value == 10.0);
  CHECK(a[0].trial == 0);
  CHECK(a[0].solver == "hybrid");
  CHECK(a[1].solver == "fully_digital");
}

TEST_CASE("summary statistics", "[experiment]") {
  std::vector<ResultRow> rows;
  for (double bits : {1.0, 2.0, 4.0}) {
    ResultRow r;
    r.axis = "power_dbm";
    r.value = 30.0;
    r.solver = "hybrid";
    r.wsr_bits = bits;
    r.iters = 10;
    rows.push_back(r);
  }
  ResultRow failed = rows.front();
  failed.status = "error: boom";
  failed.wsr_bits = std::nan("");
  rows.push_back(failed);
  const auto s = summarize(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].count == 3);
  CHECK_THAT(s[0].mean_wsr_bits, WithinRel(7.0 / 3.0, 1e-14));
  // Sample variance of {1, 2, 4} is 7/3.
  CHECK_THAT(s[0].stderr_wsr_bits, WithinRel(std::sqrt(7.0 / 3.0 / 3.0), 1e-14));
  CHECK(summary_path("out/a.csv") == "out/a_summary.csv");
}

TEST_CASE("results CSV layout", "[experiment]") {
  std::ostringstream os;
  write_results_csv(os, {});
  CHECK(os.str() == "axis,value,trial,solver,wsr_nats,wsr_bits,iters,max_ap_power_mw,wall_ms,status\n");
}

TEST_CASE("convergence trace", "[experiment]") {
  SystemConfig cfg = tiny_spec().base;
  cfg.max_iters = 12;
  const auto rows = run_convergence_trace(cfg, 0);
  int hybrid = 0, fd = 0;
  for (const auto& r : rows)
    (r.solver == "hybrid" ? hybrid : fd)++;
  CHECK(hybrid >= 2);
  CHECK(hybrid <= 13);
  CHECK(fd >= 2);
  CHECK(fd <= 13);
  std::ostringstream os;
  write_trace_csv(os, rows);
  CHECK_THAT(os.str(), ContainsSubstring("iteration,solver,objective,wsr,max_ap_power"));
}

TEST_CASE("verify table", "[experiment][verify]") {
  VerifyOptions none;
  none.seeds = 0;
  CHECK(verify(verify_config(), none).empty());

  VerifyOptions two;
  two.seeds = 2;
  const auto rows = verify(verify_config(), two);
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows) {
    INFO(r.check << " seed " << r.seed << " value " << r.value);
    CHECK(r.pass);
  }

  two.inject_coupling_sign_fault = true;
  bool any_fail = false;
  for (const auto& r : verify(verify_config(), two))
    any_fail = any_fail || (r.check == "lagrangian_identity" && !r.pass);
  CHECK(any_fail);
}

TEST_CASE("command line exit codes", "[cli]") {
  const auto good = scratch("good.json");
  const auto bad = scratch("bad.json");
  const auto out = scratch("sweep.csv");
  {
    std::ofstream(good) << R"({"num_aps": 2, "num_users": 2, "tx_grid": [2, 2], "rx_grid": [2, 1],
      "num_rf_chains": 2, "num_paths": 4, "max_iters": 5,
      "experiment": {"axis": "power_dbm", "values": [20], "trials": 1}})";
    std::ofstream(bad) << R"({"num_aps": 2, "typo_key": 1})";
  }
  CHECK(run_cli("show-config -c " + good.string()) == 0);
  CHECK(run_cli("show-config -c " + bad.string()) == 2);
  CHECK(run_cli("show-config -c " + scratch("missing.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("sweep -c " + good.string() + " -o " + out.string()) == 0);
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(scratch("sweep_summary.csv")));
  CHECK(run_cli("verify --seeds 1") == 0);
  CHECK(run_cli("verify --seeds 1 --inject-fault coupling-sign") == 1);
}
