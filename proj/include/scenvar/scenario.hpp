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

#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenvar/roadgen.hpp"

namespace scenvar {

enum class TemplateKind { kCurvedLeft, kCurvedRight, kTJunctionLeft, kTJunctionRight, kComplex };

inline const char* to_string(TemplateKind t) {
  switch (t) {
    case TemplateKind::kCurvedLeft:
      return "curved-left";
    case TemplateKind::kCurvedRight:
      return "curved-right";
    case TemplateKind::kTJunctionLeft:
      return "t-junction-left";
    case TemplateKind::kTJunctionRight:
      return "t-junction-right";
    case TemplateKind::kComplex:
      return "complex";
  }
  return "?";
}

inline TemplateKind template_from_string(const std::string& s) {
  if (s == "curved-left") return TemplateKind::kCurvedLeft;
  if (s == "curved-right") return TemplateKind::kCurvedRight;
  if (s == "t-junction-left") return TemplateKind::kTJunctionLeft;
  if (s == "t-junction-right") return TemplateKind::kTJunctionRight;
  if (s == "complex") return TemplateKind::kComplex;
  throw ConfigError("unknown template '" + s + "'");
}

/// Reporting family used for aggregation: left/right variants fold together.
inline std::string template_family(TemplateKind t) {
  switch (t) {
    case TemplateKind::kCurvedLeft:
    case TemplateKind::kCurvedRight:
      return "curved";
    case TemplateKind::kTJunctionLeft:
    case TemplateKind::kTJunctionRight:
      return "t-junction";
    case TemplateKind::kComplex:
      return "complex";
  }
  return "?";
}

struct RouteEndpoint {
  std::string road;
  int lane{-1};
  double s{0.0};  // negative values count back from the road end
};

struct RouteSpec {
  RouteEndpoint start;
  RouteEndpoint target;
};

struct LogicalScenario {
  std::string name;
  TemplateKind template_kind{TemplateKind::kCurvedLeft};
  ParamRange varied;
  std::map<std::string, double> fixed;
  int variant_count{1};
  RouteSpec route;
  double initial_speed{0.0};
};

struct ConcreteScenario {
  std::string id;
  std::string logical;
  TemplateKind template_kind{TemplateKind::kCurvedLeft};
  std::map<std::string, double> params;
  RoadNetwork network;
  RouteSpec route;  // resolved: s is absolute along the road
  double initial_speed{0.0};
  std::string error;  // nonempty when generation failed
  std::vector<std::string> warnings;

  bool failed() const { return !error.empty(); }
};

namespace detail {

inline double param_or(const std::map<std::string, double>& params, const std::string& name,
                       double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

}  // namespace detail

/// Instantiates the road network of a template from a full parameter map.
/// Unset parameters fall back to the documented defaults.
inline RoadNetwork build_network(TemplateKind kind, const std::map<std::string, double>& params,
                                 std::vector<std::string>* warnings = nullptr) {
  using detail::param_or;
  const double lane_width = param_or(params, "lane_width", 3.5);
  const double radius = param_or(params, "radius", 150.0);
  const double entry = param_or(params, "entry_length", 50.0);
  const double exit = param_or(params, "exit_length", 50.0);
  const double arc_angle = param_or(params, "arc_angle_deg", 90.0) * kPi / 180.0;

  TJunctionParams tj;
  tj.lane_width = lane_width;
  tj.angle_deg = param_or(params, "angle_deg", 90.0);
  tj.gap = param_or(params, "gap", 10.0);
  tj.arm_length = param_or(params, "arm_length", 100.0);

  switch (kind) {
    case TemplateKind::kCurvedLeft:
      return gen_curved_road(lane_width, radius, TurnDirection::kLeft, entry, exit, arc_angle);
    case TemplateKind::kCurvedRight:
      return gen_curved_road(lane_width, radius, TurnDirection::kRight, entry, exit, arc_angle);
    case TemplateKind::kTJunctionLeft:
      tj.minor_side = TurnDirection::kLeft;
      return gen_t_junction(tj, warnings);
    case TemplateKind::kTJunctionRight:
      tj.minor_side = TurnDirection::kRight;
      return gen_t_junction(tj, warnings);
    case TemplateKind::kComplex: {
      ComplexParams cp;
      cp.tj = tj;
      cp.radius = radius;
      cp.curve_direction = TurnDirection::kLeft;
      cp.entry_len = entry;
      cp.exit_len = exit;
      cp.arc_angle = arc_angle;
      return gen_complex(cp, warnings);
    }
  }
  throw InvalidArgumentError("unknown template kind");
}

namespace detail {

inline RouteEndpoint resolve_endpoint(const RoadNetwork& net, const RouteEndpoint& e) {
  const Road* road = net.find_road(e.road);
  if (road == nullptr) {
    throw InvalidArgumentError("route references missing road " + e.road);
  }
  if (e.lane != -1 && e.lane != 1) {
    throw InvalidArgumentError("route lane must be -1 or 1");
  }
  RouteEndpoint out = e;
  if (out.s < 0.0) {
    out.s = road->length() + out.s;
  }
  if (out.s < 0.0 || out.s > road->length()) {
    throw InvalidArgumentError("route position s outside road " + e.road);
  }
  return out;
}

}  // namespace detail

/// Expands a logical scenario into its concrete variants by sweeping the
/// varied parameter linearly. Variants that fail generation are kept as error
/// records so a campaign never aborts on one bad parameter value.
inline std::vector<ConcreteScenario> expand_logical(const LogicalScenario& ls) {
  if (ls.variant_count < 1) {
    throw InvalidArgumentError("variant count must be >= 1");
  }
  if (ls.fixed.count(ls.varied.name) > 0) {
    throw InvalidArgumentError("varied parameter '" + ls.varied.name + "' also listed as fixed");
  }
  const auto values = linspace_variants(ls.varied, ls.variant_count);
  std::vector<ConcreteScenario> out;
  out.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    ConcreteScenario cs;
    char suffix[24];
    std::snprintf(suffix, sizeof(suffix), "-%04zu", i);
    cs.id = ls.name + suffix;
    cs.logical = ls.name;
    cs.template_kind = ls.template_kind;
    cs.params = ls.fixed;
    cs.params[ls.varied.name] = values[i];
    cs.initial_speed = ls.initial_speed;
    try {
      cs.network = build_network(ls.template_kind, cs.params, &cs.warnings);
      cs.network.name = cs.id;
      cs.route.start = detail::resolve_endpoint(cs.network, ls.route.start);
      cs.route.target = detail::resolve_endpoint(cs.network, ls.route.target);
      const auto violations = validate_network(cs.network);
      if (!violations.empty()) {
        cs.error = "generated network invalid: " + violations.front().rule + " on " +
                   violations.front().element_id;
      }
    } catch (const Error& e) {
      cs.error = e.what();
      cs.network = RoadNetwork{};
    }
    out.push_back(std::move(cs));
  }
  return out;
}

/// Schema of the declarative scenario-definition files (JSON):
///   name, template, varied{name,min,max,unit}, count, fixed{...},
///   route{start{road,lane,s}, target{road,lane,s}}, initial_speed.
inline LogicalScenario parse_logical_scenario(const nlohmann::json& j) {
  LogicalScenario ls;
  try {
    ls.name = j.at("name").get<std::string>();
    ls.template_kind = template_from_string(j.at("template").get<std::string>());
    const auto& v = j.at("varied");
    ls.varied.name = v.at("name").get<std::string>();
    ls.varied.min = v.at("min").get<double>();
    ls.varied.max = v.at("max").get<double>();
    ls.varied.unit = v.value("unit", std::string{"m"});
    ls.variant_count = j.at("count").get<int>();
    if (j.contains("fixed")) {
      for (const auto& [key, value] : j.at("fixed").items()) {
        ls.fixed[key] = value.get<double>();
      }
    }
    const auto read_endpoint = [](const nlohmann::json& e) {
      RouteEndpoint ep;
      ep.road = e.at("road").get<std::string>();
      ep.lane = e.at("lane").get<int>();
      ep.s = e.at("s").get<double>();
      return ep;
    };
    ls.route.start = read_endpoint(j.at("route").at("start"));
    ls.route.target = read_endpoint(j.at("route").at("target"));
    ls.initial_speed = j.value("initial_speed", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string{"scenario definition: "} + e.what());
  }
  if (ls.varied.min > ls.varied.max) {
    throw ConfigError("scenario definition: varied range min > max");
  }
  if (ls.variant_count < 1) {
    throw ConfigError("scenario definition: count must be >= 1");
  }
  return ls;
}

}  // namespace scenvar
