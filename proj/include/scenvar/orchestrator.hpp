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
// Pipeline stages over the on-disk campaign database. Each stage is
// restartable and isolated per scenario: one broken scenario never takes the
// campaign down. All stage functions write progress to the given stream and
// throw scenvar::Error subclasses for configuration/usage problems.

#pragma once

#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include "scenvar/config.hpp"
#include "scenvar/database.hpp"
#include "scenvar/opendrive.hpp"
#include "scenvar/report.hpp"

namespace scenvar {

struct StageOptions {
  fs::path db_root;
  ToolkitConfig config{};
  std::string filter;     // glob on scenario ids, empty = all
  bool force{false};      // simulate: redo existing results
  int parallelism{0};     // 0 = take from config
};

namespace detail {

inline bool id_selected(const std::string& id, const std::string& filter) {
  return filter.empty() || glob_match(filter, id);
}

inline ScenarioConfig scenario_config_for(const ConcreteScenario& cs, const ToolkitConfig& cfg) {
  ScenarioConfig sc;
  sc.scenario_name = cs.id;
  sc.map_file = "map.xodr";
  sc.start = {cs.route.start.road, cs.route.start.lane, cs.route.start.s};
  sc.target = {cs.route.target.road, cs.route.target.lane, cs.route.target.s};
  sc.initial_speed = cs.initial_speed;
  sc.vehicle_ref = cfg.vehicle_ref;
  sc.attempt_limit = cfg.attempt_limit;
  sc.timeout = cfg.timeout;
  sc.arrival_tolerance = cfg.adf.arrival_tolerance;
  return sc;
}

}  // namespace detail

/// Expands every logical scenario definition into the scenario database:
/// map.xodr, map.osm, scenario.xosc and params.json per concrete scenario,
/// plus the campaign manifest. Returns the number of generated scenarios.
inline int cmd_generate(const fs::path& definitions_dir, const StageOptions& opt,
                        std::ostream& log = std::cout,
                        const XoscTemplate& xosc_template = XoscTemplate{}) {
  if (!fs::is_directory(definitions_dir)) {
    throw ConfigError("definitions directory not found: " + definitions_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(definitions_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ConfigError("no logical scenarios found in " + definitions_dir.string());
  }

  DatabasePaths db{opt.db_root};
  Manifest manifest;
  int generated = 0;
  for (const auto& file : files) {
    LogicalScenario ls;
    try {
      ls = parse_logical_scenario(json::parse(read_text_file(file)));
    } catch (const json::exception& e) {
      throw ConfigError(file.string() + ": " + e.what());
    } catch (const Error& e) {
      throw ConfigError(file.string() + ": " + e.what());
    }
    const auto concretes = expand_logical(ls);
    int ok = 0;
    for (const auto& cs : concretes) {
      ScenarioRecord record;
      record.id = cs.id;
      record.logical = cs.logical;
      record.template_name = to_string(cs.template_kind);
      record.dir = "scenarios/" + cs.logical + "/" + cs.id;
      if (!detail::id_selected(cs.id, opt.filter)) {
        continue;
      }
      if (cs.failed()) {
        record.status = "failed";
        record.reason = cs.error;
        manifest.scenarios.push_back(std::move(record));
        continue;
      }
      const fs::path dir = db.scenario_dir(cs.logical, cs.id);
      write_text_file(dir / "map.xodr", emit_opendrive(cs.network, cs.id));
      const LaneletMap map = to_lanelets(cs.network);
      write_text_file(dir / "map.osm", emit_osm(map, opt.config.origin_lat, opt.config.origin_lon));
      write_text_file(dir / "scenario.xosc",
                      instantiate_xosc(xosc_template,
                                       detail::scenario_config_for(cs, opt.config)));
      write_text_file(dir / "params.json",
                      scenario_params_json(cs, ls.varied.name).dump(2) + "\n");
      record.status = "generated";
      manifest.scenarios.push_back(std::move(record));
      ++generated;
      ++ok;
    }
    log << file.filename().string() << ": " << ok << "/" << concretes.size()
        << " scenarios generated\n";
  }
  write_manifest(db, manifest);
  log << "database " << db.root.string() << ": " << generated << " scenarios\n";
  return generated;
}

namespace detail {

inline void simulate_one(const DatabasePaths& db, const ScenarioRecord& record,
                         const ToolkitConfig& cfg) {
  const fs::path dir = db.root / record.dir;
  const json params = json::parse(read_text_file(dir / "params.json"));
  const auto xosc = parse_xosc(read_text_file(dir / "scenario.xosc"));
  const auto odr = parse_opendrive(read_text_file(dir / "map.xodr"));
  const LaneletMap map = parse_osm(read_text_file(dir / "map.osm"), cfg.origin_lat,
                                   cfg.origin_lon);
  const RouteGraph graph = build_route_graph(map);

  RouteSpec route;
  route.start = {xosc.config.start.road, xosc.config.start.lane, xosc.config.start.s};
  route.target = {xosc.config.target.road, xosc.config.target.lane, xosc.config.target.s};
  const double lane_width = params.at("params").value("lane_width", 3.5);

  SimResult result;
  try {
    const ResolvedRoute resolved = resolve_route(odr.network, map, route);
    result = run_simulation(map, graph, resolved, xosc.config.initial_speed, lane_width,
                            xosc.config.attempt_limit, xosc.config.timeout, cfg.sim_params());
  } catch (const Error& e) {
    result.status = SimStatus::kPlanningFailed;
    result.failure_detail = e.what();
  }

  const fs::path rdir = db.result_dir(record.id);
  write_text_file(rdir / "trajectory.csv", export_csv(result));

  json rj;
  rj["id"] = record.id;
  rj["status"] = to_string(result.status);
  rj["attempts"] = result.attempts_used;
  if (!result.failure_detail.empty()) {
    rj["failure_detail"] = result.failure_detail;
  }
  rj["samples"] = result.trajectory.size();
  if (!result.trajectory.empty()) {
    const auto& last = result.trajectory.back();
    rj["final"] = {{"t", last.t},
                   {"v", last.v},
                   {"distance_to_target",
                    distance({last.x, last.y}, result.target_point)}};
  }
  rj["target"] = {{"x", result.target_point.x}, {"y", result.target_point.y}};
  rj["lane_width"] = lane_width;
  rj["template_family"] = params.at("template_family");
  rj["varied"] = params.at("varied");
  rj["params"] = params.at("params");
  write_text_file(rdir / "result.json", rj.dump(2) + "\n");
}

}  // namespace detail

/// Runs every generated scenario that has no result yet (all of them with
/// --force). Scenarios are isolated: exceptions are recorded as status
/// "errored" and the campaign continues. With parallelism > 1 scenarios run
/// on a thread pool; per-scenario outputs are identical either way.
inline int cmd_simulate(const StageOptions& opt, std::ostream& log = std::cout) {
  DatabasePaths db{opt.db_root};
  const Manifest manifest = read_manifest(db);
  std::vector<const ScenarioRecord*> work;
  for (const auto& record : manifest.scenarios) {
    if (record.status != "generated" || !detail::id_selected(record.id, opt.filter)) {
      continue;
    }
    if (!opt.force && fs::exists(db.result_dir(record.id) / "result.json")) {
      continue;
    }
    work.push_back(&record);
  }

  std::atomic<size_t> next{0};
  std::atomic<int> errored{0};
  std::mutex log_mutex;
  const int threads = std::max(1, opt.parallelism > 0 ? opt.parallelism : opt.config.parallelism);
  const auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= work.size()) {
        return;
      }
      const ScenarioRecord& record = *work[i];
      try {
        detail::simulate_one(db, record, opt.config);
      } catch (const std::exception& e) {
        ++errored;
        json rj;
        rj["id"] = record.id;
        rj["status"] = "errored";
        rj["attempts"] = 0;
        rj["failure_detail"] = e.what();
        rj["samples"] = 0;
        try {
          write_text_file(db.result_dir(record.id) / "result.json", rj.dump(2) + "\n");
        } catch (const std::exception&) {
          // unwritable results directory; the verify stage will flag it
        }
        std::lock_guard<std::mutex> lock(log_mutex);
        log << record.id << ": errored (" << e.what() << ")\n";
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }

  std::map<std::string, int> by_status;
  for (const auto& record : manifest.scenarios) {
    const fs::path rj = db.result_dir(record.id) / "result.json";
    if (record.status == "failed") {
      ++by_status["generation_failed"];
    } else if (fs::exists(rj)) {
      ++by_status[json::parse(read_text_file(rj)).at("status").get<std::string>()];
    }
  }
  log << "simulated " << work.size() << " scenarios (" << threads << " threads):";
  for (const auto& [status, count] : by_status) {
    log << " " << status << "=" << count;
  }
  log << "\n";
  return static_cast<int>(work.size());
}

/// Computes kpi.json for every simulated scenario with a usable trajectory
/// and writes the campaign summary (template aggregates + radius sweeps).
inline void cmd_evaluate(const StageOptions& opt, std::ostream& log = std::cout) {
  DatabasePaths db{opt.db_root};
  const Manifest manifest = read_manifest(db);

  struct Row {
    std::string id;
    std::string logical;
    std::string family;
    std::string status;
    std::string varied;
    std::map<std::string, double> params;
    bool has_kpi{false};
    KpiVector kpi{};
  };
  std::vector<Row> rows;
  int evaluated = 0;
  for (const auto& record : manifest.scenarios) {
    if (!detail::id_selected(record.id, opt.filter)) {
      continue;
    }
    Row row;
    row.id = record.id;
    row.logical = record.logical;
    if (record.status == "failed") {
      row.status = "generation_failed";
      rows.push_back(std::move(row));
      continue;
    }
    const fs::path rdir = db.result_dir(record.id);
    if (!fs::exists(rdir / "result.json")) {
      continue;  // not simulated yet
    }
    const json rj = json::parse(read_text_file(rdir / "result.json"));
    row.status = rj.at("status").get<std::string>();
    row.family = rj.value("template_family", "");
    row.varied = rj.value("varied", "");
    if (rj.contains("params")) {
      for (const auto& [k, v] : rj.at("params").items()) {
        row.params[k] = v.get<double>();
      }
    }
    const bool evaluable = row.status == "success" || row.status == "offroad" ||
                           row.status == "timeout" || row.status == "stalled";
    if (evaluable && fs::exists(rdir / "trajectory.csv")) {
      const auto traj = parse_trajectory_csv(read_text_file(rdir / "trajectory.csv"));
      if (traj.size() >= 3) {
        const Vec2 target{rj.at("target").at("x").get<double>(),
                          rj.at("target").at("y").get<double>()};
        const double lane_width = rj.value("lane_width", 3.5);
        row.kpi = compute_kpis(traj, opt.config.kpi, target, lane_width);
        row.has_kpi = true;
        ++evaluated;

        json kj;
        kj["id"] = row.id;
        kj["template_family"] = row.family;
        kj["status"] = row.status;
        kj["params"] = rj.at("params");
        kj["scores"] = json::object();
        const auto scores = row.kpi.scores();
        for (size_t i = 0; i < scores.size(); ++i) {
          kj["scores"][kKpiAxisNames[i]] = scores[i];
        }
        kj["mean_dynamic"] = mean_dynamic_kpi(row.kpi);
        kj["comfort_rms"] = row.kpi.comfort_rms;
        kj["comfort_class"] = to_string(row.kpi.comfort);
        write_text_file(rdir / "kpi.json", kj.dump(2) + "\n");
      }
    } else if (evaluable) {
      log << record.id << ": trajectory.csv missing, skipped\n";
    }
    rows.push_back(std::move(row));
  }

  std::vector<ScenarioOutcome> outcomes;
  for (const auto& row : rows) {
    if (row.family.empty()) {
      continue;
    }
    ScenarioOutcome o;
    o.template_family = row.family;
    o.success = row.status == "success";
    if (row.has_kpi) {
      o.kpi = row.kpi;
    }
    outcomes.push_back(std::move(o));
  }
  const auto aggregates = aggregate_by_template(outcomes);

  json summary;
  summary["campaign"]["total"] = rows.size();
  summary["campaign"]["by_status"] = json::object();
  for (const auto& row : rows) {
    const std::string key = row.status.empty() ? "unknown" : row.status;
    summary["campaign"]["by_status"][key] =
        summary["campaign"]["by_status"].value(key, 0) + 1;
  }
  summary["templates"] = json::array();
  for (const auto& agg : aggregates) {
    json t;
    t["family"] = agg.template_family;
    t["count"] = agg.scenario_count;
    t["success_count"] = agg.success_count;
    t["success_rate"] = agg.success_rate;
    if (agg.mean) {
      t["means"] = json::object();
      const auto scores = agg.mean->scores();
      for (size_t i = 0; i < scores.size(); ++i) {
        t["means"][kKpiAxisNames[i]] = scores[i];
      }
      t["means"]["comfort_rms"] = agg.mean->comfort_rms;
      t["means"]["comfort_class"] = to_string(agg.mean->comfort);
    } else {
      t["means"] = nullptr;
    }
    summary["templates"].push_back(std::move(t));
  }

  // Radius sweeps: logical scenarios that varied the curve radius.
  summary["sweeps"] = json::array();
  std::vector<std::string> logical_order;
  for (const auto& row : rows) {
    if (row.varied == "radius" &&
        std::find(logical_order.begin(), logical_order.end(), row.logical) ==
            logical_order.end()) {
      logical_order.push_back(row.logical);
    }
  }
  for (const auto& logical : logical_order) {
    std::vector<SweepPoint> points;
    std::vector<std::pair<double, double>> kpi_points;
    for (const auto& row : rows) {
      if (row.logical != logical || row.params.count("radius") == 0) {
        continue;
      }
      const double lane_width =
          row.params.count("lane_width") > 0 ? row.params.at("lane_width") : 3.5;
      points.push_back({row.params.at("radius"), lane_width, row.status == "success"});
      if (row.status == "success" && row.has_kpi) {
        kpi_points.emplace_back(row.params.at("radius"), mean_dynamic_kpi(row.kpi));
      }
    }
    if (points.empty()) {
      continue;
    }
    std::sort(kpi_points.begin(), kpi_points.end());
    for (const auto& res : critical_radius(points)) {
      json s;
      s["logical"] = logical;
      s["lane_width"] = res.lane_width;
      s["points"] = points.size();
      s["successes"] = kpi_points.size();
      if (res.critical_radius) {
        s["critical_radius"] = *res.critical_radius;
      } else {
        s["critical_radius"] = nullptr;
      }
      s["monotone"] = res.monotone;
      if (kpi_points.size() >= 5) {
        s["spearman_dynamic_kpi"] = kpi_radius_trend(kpi_points);
      } else {
        s["spearman_dynamic_kpi"] = nullptr;
      }
      summary["sweeps"].push_back(std::move(s));
    }
  }
  write_text_file(db.summary(), summary.dump(2) + "\n");
  log << "evaluated " << evaluated << " scenarios, summary at " << db.summary().string() << "\n";
}

/// Renders the spider chart and the text table from summary.json.
inline void cmd_report(const StageOptions& opt, std::ostream& log = std::cout) {
  DatabasePaths db{opt.db_root};
  if (!fs::exists(db.summary())) {
    throw ConfigError("summary.json not found; run evaluate first");
  }
  const json summary = json::parse(read_text_file(db.summary()));
  std::vector<TemplateAggregate> aggregates;
  for (const auto& t : summary.at("templates")) {
    TemplateAggregate agg;
    agg.template_family = t.at("family").get<std::string>();
    agg.scenario_count = t.at("count").get<int>();
    agg.success_count = t.at("success_count").get<int>();
    agg.success_rate = t.at("success_rate").get<double>();
    if (!t.at("means").is_null()) {
      KpiVector mean;
      const auto& m = t.at("means");
      mean.long_accel = m.at("long_accel").get<double>();
      mean.long_decel = m.at("long_decel").get<double>();
      mean.lat_accel = m.at("lat_accel").get<double>();
      mean.long_jerk = m.at("long_jerk").get<double>();
      mean.lat_jerk = m.at("lat_jerk").get<double>();
      mean.distance_target = m.at("distance_target").get<double>();
      mean.lane_keeping = m.at("lane_keeping").get<double>();
      mean.oscillation = m.at("oscillation").get<double>();
      mean.comfort_rms = m.at("comfort_rms").get<double>();
      mean.comfort = comfort_class(mean.comfort_rms);
      agg.mean = mean;
    }
    aggregates.push_back(std::move(agg));
  }
  write_text_file(db.spider(), spider_svg(aggregates));
  const std::string table = report_table(aggregates);
  write_text_file(db.report_txt(), table);
  log << table;
  log << "report at " << db.spider().string() << "\n";
}

struct VerifyReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Cross-checks manifest, scenario directories and result files.
inline VerifyReport cmd_verify(const StageOptions& opt, std::ostream& log = std::cout) {
  DatabasePaths db{opt.db_root};
  VerifyReport report;
  Manifest manifest;
  try {
    manifest = read_manifest(db);
  } catch (const Error& e) {
    report.violations.push_back(e.what());
    log << "verify: " << e.what() << "\n";
    return report;
  }
  std::map<std::string, int> seen;
  for (const auto& record : manifest.scenarios) {
    if (++seen[record.id] > 1) {
      report.violations.push_back("duplicate id " + record.id);
    }
    if (record.status == "generated") {
      for (const char* file : {"map.xodr", "map.osm", "scenario.xosc", "params.json"}) {
        if (!fs::exists(db.root / record.dir / file)) {
          report.violations.push_back(record.id + ": missing " + file);
        }
      }
    }
    const fs::path rdir = db.result_dir(record.id);
    if (fs::exists(rdir / "kpi.json") && !fs::exists(rdir / "result.json")) {
      report.violations.push_back(record.id + ": kpi.json without result.json");
    }
    if (fs::exists(rdir / "result.json") &&
        !json::accept(read_text_file(rdir / "result.json"))) {
      report.violations.push_back(record.id + ": result.json is not valid JSON");
    }
  }
  if (fs::exists(db.results_root())) {
    for (const auto& entry : fs::directory_iterator(db.results_root())) {
      if (entry.is_directory() && seen.count(entry.path().filename().string()) == 0) {
        report.violations.push_back("results/" + entry.path().filename().string() +
                                    " not in manifest");
      }
    }
  }
  log << "verify: " << (report.ok() ? "ok" : std::to_string(report.violations.size()) +
                                                 " violation(s)")
      << "\n";
  for (const auto& v : report.violations) {
    log << "  " << v << "\n";
  }
  return report;
}

/// generate -> simulate -> evaluate -> report. Any stage failure stops the
/// pipeline; the thrown error names the stage.
inline void cmd_pipeline(const fs::path& definitions_dir, const StageOptions& opt,
                         std::ostream& log = std::cout,
                         const XoscTemplate& xosc_template = XoscTemplate{}) {
  const auto stage = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(std::string{"stage "} + name + " failed: " + e.what());
    }
  };
  stage("generate", [&] {
    if (cmd_generate(definitions_dir, opt, log, xosc_template) == 0) {
      throw Error("no scenario generated");
    }
  });
  stage("simulate", [&] { cmd_simulate(opt, log); });
  stage("evaluate", [&] { cmd_evaluate(opt, log); });
  stage("report", [&] { cmd_report(opt, log); });
}

}  // namespace scenvar
