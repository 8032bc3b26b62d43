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

#ifndef CFHP_CONFIG_IO_HPP
#define CFHP_CONFIG_IO_HPP

// JSON configuration. A document holds SystemConfig keys at the top level
// and an optional "experiment" object:
//
//   { "num_aps": 2, "tx_grid": [4, 4], "max_power_dbm": 30,
//     "experiment": { "axis": "power_dbm", "values": [10, 20, 30],
//                     "solvers": ["hybrid", "fully_digital"], "trials": 10,
//                     "output": "power.csv", "workers": 1 } }
//
// Unknown keys are rejected so typos do not silently fall back to defaults.

#include "cfhp/experiment.hpp"
#include "cfhp/model.hpp"

#include <string>

namespace cfhp {

/// Throws ConfigError on malformed JSON, unknown keys or wrong types.
ExperimentSpec parse_experiment(const std::string& json_text, const ExperimentSpec& defaults = {});
SystemConfig parse_system_config(const std::string& json_text, const SystemConfig& defaults = desk_scale_config());

ExperimentSpec load_experiment_file(const std::string& path, const ExperimentSpec& defaults = {});

std::string to_json(const SystemConfig& cfg, int indent = 2);
std::string to_json(const ExperimentSpec& spec, int indent = 2);

} // namespace cfhp

#endif // CFHP_CONFIG_IO_HPP
