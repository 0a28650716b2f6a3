// Copyright 2026 the scenvar authors
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
//
// Toolkit configuration file: TOML-style [section] / key = value text with a
// closed schema. Every key has a default; unknown sections or keys are
// reported as errors before any pipeline stage runs.

#pragma once

#include <cctype>
#include <map>
#include <string>

#include "scenvar/adf.hpp"
#include "scenvar/evaluation.hpp"
#include "scenvar/vehicle.hpp"

namespace scenvar {

struct ToolkitConfig {
  VehicleParams vehicle{};
  AdfParams adf{};
  KpiRefs kpi{};
  double dt{0.01};
  int attempt_limit{3};
  double timeout{180.0};
  double offroad_margin{0.2};
  int parallelism{1};
  double origin_lat{49.0};
  double origin_lon{8.0};
  std::string output_root{"out"};
  std::string vehicle_ref{"car.default"};

  SimParams sim_params() const {
    SimParams p;
    p.vehicle = vehicle;
    p.adf = adf;
    p.dt = dt;
    p.offroad_margin = offroad_margin;
    return p;
  }
};

namespace detail {

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line{0};
};

inline std::vector<ConfigEntry> parse_config_entries(std::string_view text) {
  std::vector<ConfigEntry> entries;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = text.find('\n', pos);
    std::string line{text.substr(pos, end == std::string_view::npos ? end : end - pos)};
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    ConfigEntry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.value.size() >= 2 && (e.value.front() == '"' || e.value.front() == '\'') &&
        e.value.back() == e.value.front()) {
      e.value = e.value.substr(1, e.value.size() - 2);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline double config_number(const ConfigEntry& e) {
  try {
    size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) {
      throw std::invalid_argument{""};
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(e.line) + ": value of " + e.section + "." + e.key +
                      " is not a number: " + e.value);
  }
}

}  // namespace detail

/// Parses and schema-checks a configuration file. Missing keys keep their
/// defaults; unknown keys are errors.
inline ToolkitConfig parse_toolkit_config(std::string_view text) {
  ToolkitConfig cfg;
  std::map<std::string, double*> numbers = {
      {"vehicle.wheelbase", &cfg.vehicle.wheelbase},
      {"vehicle.width", &cfg.vehicle.width},
      {"vehicle.max_steer", &cfg.vehicle.max_steer},
      {"vehicle.max_steer_rate", &cfg.vehicle.max_steer_rate},
      {"vehicle.accel_min", &cfg.vehicle.accel_min},
      {"vehicle.accel_max", &cfg.vehicle.accel_max},
      {"vehicle.jerk_limit", &cfg.vehicle.jerk_limit},
      {"adf.cruise_speed", &cfg.adf.cruise_speed},
      {"adf.lat_accel_limit", &cfg.adf.lat_accel_limit},
      {"adf.curve_speed_min", &cfg.adf.curve_speed_min},
      {"adf.lookahead_gain", &cfg.adf.lookahead_gain},
      {"adf.lookahead_min", &cfg.adf.lookahead_min},
      {"adf.lookahead_max", &cfg.adf.lookahead_max},
      {"adf.stop_speed_eps", &cfg.adf.stop_speed_eps},
      {"adf.arrival_tolerance", &cfg.adf.arrival_tolerance},
      {"adf.speed_gain", &cfg.adf.speed_gain},
      {"adf.accel_comfort", &cfg.adf.accel_comfort},
      {"adf.decel_comfort", &cfg.adf.decel_comfort},
      {"adf.command_jerk", &cfg.adf.command_jerk},
      {"adf.speed_preview_time", &cfg.adf.speed_preview_time},
      {"adf.stop_offset", &cfg.adf.stop_offset},
      {"kpi.a_long_ref", &cfg.kpi.a_long_ref},
      {"kpi.a_decel_ref", &cfg.kpi.a_decel_ref},
      {"kpi.a_lat_ref", &cfg.kpi.a_lat_ref},
      {"kpi.jerk_long_ref", &cfg.kpi.jerk_long_ref},
      {"kpi.jerk_lat_ref", &cfg.kpi.jerk_lat_ref},
      {"kpi.d_target_ref", &cfg.kpi.d_target_ref},
      {"kpi.lane_dev_ref", &cfg.kpi.lane_dev_ref},
      {"kpi.osc_rms_ref", &cfg.kpi.osc_rms_ref},
      {"simulation.dt", &cfg.dt},
      {"simulation.timeout", &cfg.timeout},
      {"simulation.offroad_margin", &cfg.offroad_margin},
      {"map.origin_lat", &cfg.origin_lat},
      {"map.origin_lon", &cfg.origin_lon},
  };
  for (const auto& e : detail::parse_config_entries(text)) {
    const std::string full = e.section.empty() ? e.key : e.section + "." + e.key;
    if (const auto it = numbers.find(full); it != numbers.end()) {
      *it->second = detail::config_number(e);
    } else if (full == "simulation.attempt_limit") {
      cfg.attempt_limit = static_cast<int>(detail::config_number(e));
    } else if (full == "simulation.parallelism") {
      cfg.parallelism = static_cast<int>(detail::config_number(e));
    } else if (full == "output.root") {
      cfg.output_root = e.value;
    } else if (full == "output.vehicle_ref") {
      cfg.vehicle_ref = e.value;
    } else {
      throw ConfigError("line " + std::to_string(e.line) + ": unknown configuration key '" +
                        full + "'");
    }
  }
  if (!(cfg.dt > 0.0) || cfg.attempt_limit < 1 || cfg.parallelism < 1 || !(cfg.timeout > 0.0)) {
    throw ConfigError("configuration out of range: dt, timeout > 0; attempt_limit, parallelism >= 1");
  }
  return cfg;
}

}  // namespace scenvar
