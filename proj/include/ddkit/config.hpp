// Copyright 2026 The ddkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ddkit/simulate.hpp"

namespace ddkit {

// Run-wide defaults. Every key of the JSON document is optional; unknown keys
// are rejected so typos cannot silently fall back to defaults.
//
//   bath_dim       int     4
//   norm_bound     double  1.0
//   seeds          int     8      (seeds 1..n)
//   t_min, t_max   double  0.02, 0.6
//   t_points       int     12
//   error_floor    double  1e-12
//   error_ceiling  double  1e-2
//   tau_min        double  0.002  (pulse scans, in units of 1/||H||)
//   tau_max        double  0.1
//   tau_points     int     8
//   pulse_steps    int     1000
//   threads        int     0      (0 = hardware concurrency)
struct Config {
  int bath_dim = 4;
  double norm_bound = 1.0;
  int seeds = 8;
  double t_min = 0.02;
  double t_max = 0.6;
  int t_points = 12;
  double error_floor = 1e-12;
  double error_ceiling = 1e-2;
  double tau_min = 0.002;
  double tau_max = 0.1;
  int tau_points = 8;
  int pulse_steps = 1000;
  unsigned threads = 0;

  RunConfig run_config() const;
  std::vector<double> tau_grid() const;

  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Reads `path` if given, else $DDKIT_CONFIG if set, else returns defaults.
Config load_config(const std::optional<std::string>& path);

}  // namespace ddkit
