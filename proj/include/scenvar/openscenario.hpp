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
// OpenSCENARIO 1.x subset: FileHeader, RoadNetwork/LogicFile, one ego entity,
// an Init teleport + initial speed, and a stop trigger on reaching the target
// lane position. Concrete files are stamped out of a template whose
// placeholder slots use {name} syntax; everything else is left untouched.
// Toolkit-specific settings (attempt limit, timeout) travel as prefixed
// ParameterDeclarations so the files stay readable by standard tools.

#pragma once

#include <string>
#include <vector>

#include "scenvar/strings.hpp"
#include "scenvar/xml.hpp"

namespace scenvar {

class TemplateError : public Error {
public:
  using Error::Error;
};

struct LanePositionRef {
  std::string road;
  int lane{-1};
  double s{0.0};
};

struct ScenarioConfig {
  std::string scenario_name;
  std::string map_file;
  LanePositionRef start;
  double initial_speed{0.0};
  LanePositionRef target;
  std::string vehicle_ref{"car.default"};
  int attempt_limit{3};
  double timeout{180.0};
  double arrival_tolerance{2.0};
};

inline void validate_scenario_config(const ScenarioConfig& cfg) {
  if (cfg.start.road == cfg.target.road && cfg.start.lane == cfg.target.lane &&
      cfg.start.s == cfg.target.s) {
    throw StructuralError("scenario start equals target");
  }
  if (cfg.initial_speed < 0.0) {
    throw StructuralError("initial speed must be >= 0");
  }
  if (cfg.attempt_limit < 1) {
    throw StructuralError("attempt limit must be >= 1");
  }
}

inline constexpr const char* kDefaultXoscTemplate =
    R"(<?xml version="1.0" encoding="UTF-8"?>
<OpenSCENARIO>
  <FileHeader revMajor="1" revMinor="0" date="2026-01-01T00:00:00" description="{scenario_name}" author="scenvar"/>
  <ParameterDeclarations>
    <ParameterDeclaration name="scenvar_attempt_limit" parameterType="integer" value="{attempt_limit}"/>
    <ParameterDeclaration name="scenvar_timeout" parameterType="double" value="{timeout}"/>
  </ParameterDeclarations>
  <CatalogLocations/>
  <RoadNetwork>
    <LogicFile filepath="{logic_file}"/>
  </RoadNetwork>
  <Entities>
    <ScenarioObject name="ego">
      <CatalogReference catalogName="VehicleCatalog" entryName="{vehicle_ref}"/>
    </ScenarioObject>
  </Entities>
  <Storyboard>
    <Init>
      <Actions>
        <Private entityRef="ego">
          <PrivateAction>
            <TeleportAction>
              <Position>
                <LanePosition roadId="{start_road}" laneId="{start_lane}" s="{start_s}" offset="0"/>
              </Position>
            </TeleportAction>
          </PrivateAction>
          <PrivateAction>
            <LongitudinalAction>
              <SpeedAction>
                <SpeedActionDynamics dynamicsShape="step" value="0" dynamicsDimension="time"/>
                <SpeedActionTarget>
                  <AbsoluteTargetSpeed value="{initial_speed}"/>
                </SpeedActionTarget>
              </SpeedAction>
            </LongitudinalAction>
          </PrivateAction>
        </Private>
      </Actions>
    </Init>
    <StopTrigger>
      <ConditionGroup>
        <Condition name="arrival" delay="0" conditionEdge="rising">
          <ByEntityCondition>
            <TriggeringEntities triggeringEntitiesRule="any">
              <EntityRef entityRef="ego"/>
            </TriggeringEntities>
            <EntityCondition>
              <ReachPositionCondition tolerance="{arrival_tolerance}">
                <Position>
                  <LanePosition roadId="{target_road}" laneId="{target_lane}" s="{target_s}" offset="0"/>
                </Position>
              </ReachPositionCondition>
            </EntityCondition>
          </ByEntityCondition>
        </Condition>
      </ConditionGroup>
    </StopTrigger>
  </Storyboard>
</OpenSCENARIO>
)";

struct XoscTemplate {
  std::string text{kDefaultXoscTemplate};
};

namespace detail {

inline void replace_all(std::string& text, const std::string& token, const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
}

}  // namespace detail

/// Fills every placeholder slot of the template. Placeholders that remain
/// unresolved afterwards (unknown slot names) raise TemplateError.
inline std::string instantiate_xosc(const XoscTemplate& tmpl, const ScenarioConfig& cfg) {
  validate_scenario_config(cfg);
  std::string out = tmpl.text;
  const std::vector<std::pair<std::string, std::string>> slots = {
      {"scenario_name", cfg.scenario_name},
      {"logic_file", cfg.map_file},
      {"vehicle_ref", cfg.vehicle_ref},
      {"start_road", cfg.start.road},
      {"start_lane", std::to_string(cfg.start.lane)},
      {"start_s", fmt17(cfg.start.s)},
      {"initial_speed", fmt17(cfg.initial_speed)},
      {"target_road", cfg.target.road},
      {"target_lane", std::to_string(cfg.target.lane)},
      {"target_s", fmt17(cfg.target.s)},
      {"arrival_tolerance", fmt17(cfg.arrival_tolerance)},
      {"attempt_limit", std::to_string(cfg.attempt_limit)},
      {"timeout", fmt17(cfg.timeout)},
  };
  for (const auto& [name, value] : slots) {
    detail::replace_all(out, "{" + name + "}", value);
  }
  size_t open = out.find('{');
  if (open != std::string::npos) {
    const size_t close = out.find('}', open);
    throw TemplateError("unresolved placeholder " +
                        out.substr(open, close == std::string::npos ? 12 : close - open + 1));
  }
  return out;
}

struct XoscParseResult {
  ScenarioConfig config;
  std::vector<std::string> warnings;
};

namespace detail {

inline LanePositionRef parse_lane_position(const XmlNode& position) {
  const XmlNode& lane = position.require_child("LanePosition");
  LanePositionRef ref;
  ref.road = lane.require_attr("roadId");
  ref.lane = lane.attr_int("laneId");
  ref.s = lane.attr_double("s");
  return ref;
}

}  // namespace detail

/// Extracts the simulator configuration from a scenario file. Storyboard
/// content beyond the recognized subset is reported as a warning and skipped.
inline XoscParseResult parse_xosc(std::string_view text) {
  const XmlNode root = xml_parse(text);
  if (root.name != "OpenSCENARIO") {
    throw StructuralError("root element is <" + root.name + ">, expected <OpenSCENARIO>");
  }
  XoscParseResult result;
  ScenarioConfig& cfg = result.config;

  if (const XmlNode* header = root.child("FileHeader")) {
    cfg.scenario_name = header->attr_or("description", "");
  }
  const XmlNode* road_network = root.child("RoadNetwork");
  if (road_network == nullptr || road_network->child("LogicFile") == nullptr) {
    throw StructuralError("scenario lacks RoadNetwork/LogicFile");
  }
  cfg.map_file = road_network->require_child("LogicFile").require_attr("filepath");

  const XmlNode* entities = root.child("Entities");
  if (entities == nullptr || entities->child("ScenarioObject") == nullptr) {
    throw StructuralError("scenario lacks Entities/ScenarioObject");
  }
  const XmlNode& ego = entities->require_child("ScenarioObject");
  if (const XmlNode* catalog = ego.child("CatalogReference")) {
    cfg.vehicle_ref = catalog->attr_or("entryName", cfg.vehicle_ref);
  }

  if (const XmlNode* params = root.child("ParameterDeclarations")) {
    for (const XmlNode* decl : params->children_named("ParameterDeclaration")) {
      const std::string name = decl->attr_or("name", "");
      if (name == "scenvar_attempt_limit") {
        cfg.attempt_limit = decl->attr_int("value");
      } else if (name == "scenvar_timeout") {
        cfg.timeout = decl->attr_double("value");
      }
    }
  }

  const XmlNode& storyboard = root.require_child("Storyboard");
  const XmlNode* init = storyboard.child("Init");
  if (init == nullptr) {
    throw StructuralError("scenario lacks Storyboard/Init");
  }
  bool teleport_found = false;
  for (const XmlNode* priv : init->require_child("Actions").children_named("Private")) {
    for (const XmlNode* action : priv->children_named("PrivateAction")) {
      if (const XmlNode* teleport = action->child("TeleportAction")) {
        cfg.start = detail::parse_lane_position(teleport->require_child("Position"));
        teleport_found = true;
      } else if (const XmlNode* lon = action->child("LongitudinalAction")) {
        const XmlNode* speed = lon->child("SpeedAction");
        if (speed != nullptr) {
          if (const XmlNode* target = speed->child("SpeedActionTarget")) {
            if (const XmlNode* abs = target->child("AbsoluteTargetSpeed")) {
              cfg.initial_speed = abs->attr_double("value");
            }
          }
        }
      } else {
        result.warnings.push_back("ignored Init action <" +
                                  (action->children.empty() ? "?" : action->children[0].name) +
                                  ">");
      }
    }
  }
  if (!teleport_found) {
    throw StructuralError("scenario lacks an ego TeleportAction in Init");
  }

  if (storyboard.child("Story") != nullptr) {
    result.warnings.push_back("ignored Storyboard/Story content");
  }
  bool target_found = false;
  if (const XmlNode* stop = storyboard.child("StopTrigger")) {
    for (const XmlNode* group : stop->children_named("ConditionGroup")) {
      for (const XmlNode* cond : group->children_named("Condition")) {
        const XmlNode* by_entity = cond->child("ByEntityCondition");
        if (by_entity == nullptr) {
          result.warnings.push_back("ignored stop condition " + cond->attr_or("name", "?"));
          continue;
        }
        const XmlNode* entity_cond = by_entity->child("EntityCondition");
        const XmlNode* reach =
            entity_cond != nullptr ? entity_cond->child("ReachPositionCondition") : nullptr;
        if (reach == nullptr) {
          result.warnings.push_back("ignored stop condition " + cond->attr_or("name", "?"));
          continue;
        }
        cfg.target = detail::parse_lane_position(reach->require_child("Position"));
        cfg.arrival_tolerance = reach->attr_double("tolerance");
        target_found = true;
      }
    }
  }
  if (!target_found) {
    throw StructuralError("scenario lacks a ReachPositionCondition stop trigger");
  }
  validate_scenario_config(cfg);
  return result;
}

}  // namespace scenvar
