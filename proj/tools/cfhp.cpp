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

// Command line front end.
//
//   cfhp sweep --config exp.json [--seed N] [--trials N] [--solvers a,b] [--out f.csv]
//   cfhp trace --config cfg.json [--trial N] [--out trace.csv]
//   cfhp verify [--config cfg.json] [--seeds 20]
//   cfhp show-config [--config exp.json]
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include "cfhp/config_io.hpp"
#include "cfhp/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw cfhp::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void open_output(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out)
    throw cfhp::ConfigError("cannot write '" + path + "'");
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::vector<std::string> solvers;
};

cfhp::ExperimentSpec load_spec(const std::string& path, const Overrides& o) {
  cfhp::ExperimentSpec spec = path.empty() ? cfhp::ExperimentSpec{} : cfhp::parse_experiment(read_file(path));
  if (o.seed)
    spec.base.seed = *o.seed;
  if (o.trials)
    spec.trials = *o.trials;
  if (o.workers)
    spec.workers = *o.workers;
  if (o.out)
    spec.output = *o.out;
  if (!o.solvers.empty()) {
    spec.solvers.clear();
    for (const auto& s : o.solvers)
      spec.solvers.push_back(cfhp::parse_solver(s));
  }
  cfhp::validate_spec(spec);
  return spec;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid and fully digital precoding for cell-free mmWave MIMO"};
  app.require_subcommand(1);

  std::string config;
  Overrides o;

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep along one axis; writes results and summary CSV");
  sweep->add_option("-c,--config", config, "JSON config with an \"experiment\" object");
  sweep->add_option("--seed", o.seed, "Master seed");
  sweep->add_option("--trials", o.trials, "Trials per axis value");
  sweep->add_option("--workers", o.workers, "Concurrent trials");
  sweep->add_option("--solvers", o.solvers, "Subset of hybrid,fully_digital,zf,mrt")->delimiter(',');
  sweep->add_option("-o,--out", o.out, "Results CSV path");

  std::uint64_t trial = 0;
  std::string trace_out = "trace.csv";
  auto* trace = app.add_subcommand("trace", "Per-iteration objective and WSR of both solvers on one channel");
  trace->add_option("-c,--config", config, "JSON config");
  trace->add_option("--seed", o.seed, "Master seed");
  trace->add_option("--trial", trial, "Trial index of the channel draw");
  trace->add_option("-o,--out", trace_out, "Trace CSV path");

  cfhp::VerifyOptions vopts;
  std::string fault;
  std::optional<std::string> verify_out;
  auto* verify = app.add_subcommand("verify", "Run the numerical oracles over seeded instances");
  verify->add_option("-c,--config", config, "JSON config (defaults to a small instance)");
  verify->add_option("--seeds", vopts.seeds, "Number of seeds")->check(CLI::NonNegativeNumber);
  verify->add_option("-o,--out", verify_out, "Also write the table to this CSV path");
  verify->add_option("--inject-fault", fault)->check(CLI::IsMember({"coupling-sign"}))->group("");

  auto* show = app.add_subcommand("show-config", "Print the effective configuration as JSON");
  show->add_option("-c,--config", config, "JSON config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sweep) {
      const cfhp::ExperimentSpec spec = load_spec(config, o);
      const auto rows = cfhp::run_experiment(spec);
      std::ofstream out;
      open_output(out, spec.output);
      cfhp::write_results_csv(out, rows);
      std::ofstream sum;
      open_output(sum, cfhp::summary_path(spec.output));
      cfhp::write_summary_csv(sum, cfhp::summarize(rows));
      std::cout << "wrote " << rows.size() << " rows to " << spec.output << '\n';
      return kExitOk;
    }
    if (*trace) {
      cfhp::SystemConfig cfg = config.empty() ? cfhp::desk_scale_config() : cfhp::parse_system_config(read_file(config));
      if (o.seed)
        cfg.seed = *o.seed;
      const auto rows = cfhp::run_convergence_trace(cfg, trial);
      std::ofstream out;
      open_output(out, trace_out);
      cfhp::write_trace_csv(out, rows);
      std::cout << "wrote " << rows.size() << " rows to " << trace_out << '\n';
      return kExitOk;
    }
    if (*verify) {
      const cfhp::SystemConfig cfg = config.empty()
                                         ? cfhp::verify_config()
                                         : cfhp::parse_system_config(read_file(config), cfhp::verify_config());
      vopts.inject_coupling_sign_fault = fault == "coupling-sign";
      const auto rows = cfhp::verify(cfg, vopts);
      cfhp::write_check_table(std::cout, rows);
      if (verify_out) {
        std::ofstream out;
        open_output(out, *verify_out);
        cfhp::write_check_table(out, rows);
      }
      for (const auto& r : rows)
        if (!r.pass)
          return kExitValidation;
      return kExitOk;
    }
    if (*show) {
      const cfhp::ExperimentSpec spec = load_spec(config, o);
      std::cout << cfhp::to_json(spec) << '\n';
      return kExitOk;
    }
  } catch (const cfhp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
