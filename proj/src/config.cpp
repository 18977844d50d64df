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

#include "ddkit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "ddkit/errors.hpp"

namespace ddkit {

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig Config::run_config() const {
  if (seeds < 1) throw PreconditionError("config: seeds must be at least 1");
  RunConfig rc;
  rc.t_grid = log_grid(t_min, t_max, t_points);
  rc.seeds.clear();
  for (int s = 1; s <= seeds; ++s) rc.seeds.push_back(static_cast<std::uint64_t>(s));
  rc.error_floor = error_floor;
  rc.error_ceiling = error_ceiling;
  rc.threads = threads;
  return rc;
}

std::vector<double> Config::tau_grid() const { return log_grid(tau_min, tau_max, tau_points); }

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PreconditionError("config document must be a JSON object");
  static const std::set<std::string> known = {
      "bath_dim", "norm_bound",    "seeds",   "t_min",   "t_max",      "t_points",    "error_floor",
      "error_ceiling", "tau_min", "tau_max", "tau_points", "pulse_steps", "threads"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw PreconditionError("config: unknown key '" + item.key() + "'");
    }
  }
  Config c;
  read(j, "bath_dim", c.bath_dim);
  read(j, "norm_bound", c.norm_bound);
  read(j, "seeds", c.seeds);
  read(j, "t_min", c.t_min);
  read(j, "t_max", c.t_max);
  read(j, "t_points", c.t_points);
  read(j, "error_floor", c.error_floor);
  read(j, "error_ceiling", c.error_ceiling);
  read(j, "tau_min", c.tau_min);
  read(j, "tau_max", c.tau_max);
  read(j, "tau_points", c.tau_points);
  read(j, "pulse_steps", c.pulse_steps);
  read(j, "threads", c.threads);
  if (c.bath_dim < 1 || !(c.norm_bound > 0.0) || c.t_points < 2 || c.tau_points < 2 ||
      c.pulse_steps < 1 || !(c.error_floor < c.error_ceiling)) {
    throw PreconditionError("config: value out of range");
  }
  return c;
}

nlohmann::json Config::to_json() const {
  return {{"bath_dim", bath_dim},       {"norm_bound", norm_bound},   {"seeds", seeds},
          {"t_min", t_min},             {"t_max", t_max},             {"t_points", t_points},
          {"error_floor", error_floor}, {"error_ceiling", error_ceiling},
          {"tau_min", tau_min},         {"tau_max", tau_max},         {"tau_points", tau_points},
          {"pulse_steps", pulse_steps}, {"threads", threads}};
}

Config load_config(const std::optional<std::string>& path) {
  std::optional<std::string> chosen = path;
  if (!chosen) {
    if (const char* env = std::getenv("DDKIT_CONFIG"); env != nullptr && *env != '\0') chosen = env;
  }
  if (!chosen) return Config{};
  std::ifstream in(*chosen);
  if (!in) throw PreconditionError("cannot open config file '" + *chosen + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError("config file '" + *chosen + "' is not valid JSON: " + e.what());
  }
  return Config::from_json(j);
}

}  // namespace ddkit
