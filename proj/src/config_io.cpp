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

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cfhp {

namespace {

using nlohmann::json;

const std::set<std::string> kSystemKeys = {
    "num_aps",        "num_users",         "tx_grid",          "rx_grid",       "num_rf_chains",
    "num_streams",    "num_paths",         "noise_power_mw",   "max_power_dbm", "ap_max_power_dbm",
    "user_weights",   "penalty",           "penalty_rule",     "bisection_tol", "convergence_tol",
    "max_iters",      "antenna_spacing",   "seed",             "quadratic_model", "refine_multiplier"};

const std::set<std::string> kExperimentKeys = {"axis", "values", "solvers", "trials", "output", "workers"};

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

Grid parse_grid(const json& j, const std::string& key) {
  const auto v = get_as<std::vector<int>>(j, key);
  if (v.size() != 2)
    throw ConfigError("config key '" + key + "': expected [width, height]");
  return {v[0], v[1]};
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown " + where + " key '" + key + "'");
}

SystemConfig apply_system(const json& j, SystemConfig cfg) {
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kSystemKeys.count(key) && key != "experiment")
      throw ConfigError("unknown config key '" + key + "'");

  const auto has = [&](const char* k) { return j.contains(k); };
  if (has("num_aps")) cfg.num_aps = get_as<int>(j, "num_aps");
  if (has("num_users")) cfg.num_users = get_as<int>(j, "num_users");
  if (has("tx_grid")) cfg.tx_grid = parse_grid(j, "tx_grid");
  if (has("rx_grid")) cfg.rx_grid = parse_grid(j, "rx_grid");
  if (has("num_rf_chains")) cfg.num_rf_chains = get_as<int>(j, "num_rf_chains");
  if (has("num_streams")) cfg.num_streams = get_as<int>(j, "num_streams");
  if (has("num_paths")) cfg.num_paths = get_as<int>(j, "num_paths");
  if (has("noise_power_mw")) cfg.noise_power = get_as<double>(j, "noise_power_mw");
  if (has("max_power_dbm")) cfg.max_power_dbm = get_as<double>(j, "max_power_dbm");
  if (has("ap_max_power_dbm")) cfg.ap_max_power_dbm = get_as<std::vector<double>>(j, "ap_max_power_dbm");
  if (has("user_weights")) cfg.user_weights = get_as<std::vector<double>>(j, "user_weights");
  if (has("penalty")) {
    if (j.at("penalty").is_null())
      cfg.penalty.reset();
    else
      cfg.penalty = get_as<double>(j, "penalty");
  }
  if (has("penalty_rule")) {
    const auto r = get_as<std::string>(j, "penalty_rule");
    if (r == "simulation")
      cfg.penalty_rule = PenaltyRule::kSimulation;
    else if (r == "listing")
      cfg.penalty_rule = PenaltyRule::kListing;
    else
      throw ConfigError("penalty_rule must be 'simulation' or 'listing'");
  }
  if (has("bisection_tol")) cfg.bisection_tol = get_as<double>(j, "bisection_tol");
  if (has("convergence_tol")) cfg.convergence_tol = get_as<double>(j, "convergence_tol");
  if (has("max_iters")) cfg.max_iters = get_as<int>(j, "max_iters");
  if (has("antenna_spacing")) cfg.antenna_spacing = get_as<double>(j, "antenna_spacing");
  if (has("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (has("quadratic_model")) {
    const auto m = get_as<std::string>(j, "quadratic_model");
    if (m == "all_users")
      cfg.quadratic_model = QuadraticModel::kAllUsers;
    else if (m == "own_user")
      cfg.quadratic_model = QuadraticModel::kOwnUser;
    else
      throw ConfigError("quadratic_model must be 'all_users' or 'own_user'");
  }
  if (has("refine_multiplier")) cfg.refine_multiplier = get_as<bool>(j, "refine_multiplier");
  return validate_config(cfg);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

json system_json(const SystemConfig& cfg) {
  json j;
  j["num_aps"] = cfg.num_aps;
  j["num_users"] = cfg.num_users;
  j["tx_grid"] = {cfg.tx_grid.width, cfg.tx_grid.height};
  j["rx_grid"] = {cfg.rx_grid.width, cfg.rx_grid.height};
  j["num_rf_chains"] = cfg.num_rf_chains;
  j["num_streams"] = cfg.num_streams;
  j["num_paths"] = cfg.num_paths;
  j["noise_power_mw"] = cfg.noise_power;
  j["max_power_dbm"] = cfg.max_power_dbm;
  if (!cfg.ap_max_power_dbm.empty())
    j["ap_max_power_dbm"] = cfg.ap_max_power_dbm;
  if (!cfg.user_weights.empty())
    j["user_weights"] = cfg.user_weights;
  if (cfg.penalty)
    j["penalty"] = *cfg.penalty;
  j["penalty_rule"] = cfg.penalty_rule == PenaltyRule::kSimulation ? "simulation" : "listing";
  j["bisection_tol"] = cfg.bisection_tol;
  j["convergence_tol"] = cfg.convergence_tol;
  j["max_iters"] = cfg.max_iters;
  j["antenna_spacing"] = cfg.antenna_spacing;
  j["seed"] = cfg.seed;
  j["quadratic_model"] = cfg.quadratic_model == QuadraticModel::kAllUsers ? "all_users" : "own_user";
  j["refine_multiplier"] = cfg.refine_multiplier;
  return j;
}

} // namespace

SystemConfig parse_system_config(const std::string& json_text, const SystemConfig& defaults) {
  return apply_system(parse_text(json_text), defaults);
}

ExperimentSpec parse_experiment(const std::string& json_text, const ExperimentSpec& defaults) {
  const json j = parse_text(json_text);
  ExperimentSpec spec = defaults;
  spec.base = apply_system(j, defaults.base);
  if (j.contains("experiment")) {
    const json& e = j.at("experiment");
    if (!e.is_object())
      throw ConfigError("'experiment' must be an object");
    check_keys(e, kExperimentKeys, "experiment");
    if (e.contains("axis")) spec.axis = parse_axis(get_as<std::string>(e, "axis"));
    if (e.contains("values")) spec.values = get_as<std::vector<double>>(e, "values");
    if (e.contains("solvers")) {
      spec.solvers.clear();
      for (const auto& s : get_as<std::vector<std::string>>(e, "solvers"))
        spec.solvers.push_back(parse_solver(s));
    }
    if (e.contains("trials")) spec.trials = get_as<int>(e, "trials");
    if (e.contains("output")) spec.output = get_as<std::string>(e, "output");
    if (e.contains("workers")) spec.workers = get_as<int>(e, "workers");
  }
  validate_spec(spec);
  return spec;
}

ExperimentSpec load_experiment_file(const std::string& path, const ExperimentSpec& defaults) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str(), defaults);
}

std::string to_json(const SystemConfig& cfg, int indent) {
  return system_json(cfg).dump(indent);
}

std::string to_json(const ExperimentSpec& spec, int indent) {
  json j = system_json(spec.base);
  json e;
  e["axis"] = to_string(spec.axis);
  e["values"] = spec.values;
  std::vector<std::string> solvers;
  for (Solver s : spec.solvers)
    solvers.push_back(to_string(s));
  e["solvers"] = solvers;
  e["trials"] = spec.trials;
  e["output"] = spec.output;
  e["workers"] = spec.workers;
  j["experiment"] = e;
  return j.dump(indent);
}

} // namespace cfhp
