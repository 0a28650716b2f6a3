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
// On-disk campaign layout. One directory per concrete scenario, one per
// result; everything diffable text:
//
//   <root>/manifest.json
//   <root>/scenarios/<logical>/<id>/{map.xodr, map.osm, scenario.xosc, params.json}
//   <root>/results/<id>/{trajectory.csv, result.json, kpi.json}
//   <root>/results/{summary.json, spider.svg, report.txt}

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenvar/errors.hpp"
#include "scenvar/scenario.hpp"

namespace scenvar {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return text;
}

inline void write_text_file(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

struct ScenarioRecord {
  std::string id;
  std::string logical;
  std::string template_name;
  std::string status;  // "generated" | "failed"
  std::string reason;  // set when failed
  std::string dir;     // relative to the database root
};

struct Manifest {
  std::vector<ScenarioRecord> scenarios;
};

struct DatabasePaths {
  fs::path root;

  fs::path manifest() const { return root / "manifest.json"; }
  fs::path scenario_dir(const std::string& logical, const std::string& id) const {
    return root / "scenarios" / logical / id;
  }
  fs::path results_root() const { return root / "results"; }
  fs::path result_dir(const std::string& id) const { return results_root() / id; }
  fs::path summary() const { return results_root() / "summary.json"; }
  fs::path spider() const { return results_root() / "spider.svg"; }
  fs::path report_txt() const { return results_root() / "report.txt"; }
};

inline void write_manifest(const DatabasePaths& db, const Manifest& manifest) {
  json j;
  j["scenarios"] = json::array();
  for (const auto& r : manifest.scenarios) {
    json e;
    e["id"] = r.id;
    e["logical"] = r.logical;
    e["template"] = r.template_name;
    e["status"] = r.status;
    if (!r.reason.empty()) {
      e["reason"] = r.reason;
    }
    e["dir"] = r.dir;
    j["scenarios"].push_back(std::move(e));
  }
  write_text_file(db.manifest(), j.dump(2) + "\n");
}

inline Manifest read_manifest(const DatabasePaths& db) {
  Manifest manifest;
  json j;
  try {
    j = json::parse(read_text_file(db.manifest()));
    for (const auto& e : j.at("scenarios")) {
      ScenarioRecord r;
      r.id = e.at("id").get<std::string>();
      r.logical = e.at("logical").get<std::string>();
      r.template_name = e.at("template").get<std::string>();
      r.status = e.at("status").get<std::string>();
      r.reason = e.value("reason", "");
      r.dir = e.at("dir").get<std::string>();
      manifest.scenarios.push_back(std::move(r));
    }
  } catch (const json::exception& ex) {
    throw StructuralError("manifest: " + std::string{ex.what()});
  }
  return manifest;
}

/// params.json: everything the simulation stage needs about one scenario.
inline json scenario_params_json(const ConcreteScenario& cs, const std::string& varied_name) {
  json j;
  j["id"] = cs.id;
  j["logical"] = cs.logical;
  j["template"] = to_string(cs.template_kind);
  j["template_family"] = template_family(cs.template_kind);
  j["varied"] = varied_name;
  j["params"] = json::object();
  for (const auto& [k, v] : cs.params) {
    j["params"][k] = v;
  }
  j["route"] = {{"start", {{"road", cs.route.start.road},
                           {"lane", cs.route.start.lane},
                           {"s", cs.route.start.s}}},
                {"target", {{"road", cs.route.target.road},
                            {"lane", cs.route.target.lane},
                            {"s", cs.route.target.s}}}};
  j["initial_speed"] = cs.initial_speed;
  if (!cs.warnings.empty()) {
    j["warnings"] = cs.warnings;
  }
  j["files"] = {{"xodr", "map.xodr"}, {"osm", "map.osm"}, {"xosc", "scenario.xosc"}};
  return j;
}

}  // namespace scenvar
