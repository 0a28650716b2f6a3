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

#include <iostream>

#include <CLI11.hpp>

#include "scenvar/orchestrator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStageFailure = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario-based road geometry testing for an automated driving function"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --db/--config after the subcommand name

  std::string db_root = "out";
  std::string config_path;
  std::string definitions = "definitions";
  std::string xosc_template_path;
  std::string filter;
  int parallel = 0;
  bool force = false;

  app.add_option("--db", db_root, "campaign database root")->capture_default_str();
  app.add_option("--config", config_path, "toolkit configuration file");

  auto* gen = app.add_subcommand("generate", "expand logical scenarios into the database");
  gen->add_option("--definitions", definitions, "logical scenario definition directory")
      ->capture_default_str();
  gen->add_option("--xosc-template", xosc_template_path, "scenario template override");
  gen->add_option("--filter", filter, "glob on scenario ids");

  auto* sim = app.add_subcommand("simulate", "run the driving function on generated scenarios");
  sim->add_option("--parallel", parallel, "worker threads (default from config)");
  sim->add_flag("--force", force, "redo scenarios that already have results");
  sim->add_option("--filter", filter, "glob on scenario ids");

  auto* eval = app.add_subcommand("evaluate", "compute KPIs and the campaign summary");
  eval->add_option("--filter", filter, "glob on scenario ids");

  auto* rep = app.add_subcommand("report", "render spider chart and text table");

  auto* pipe = app.add_subcommand("pipeline", "generate, simulate, evaluate and report");
  pipe->add_option("--definitions", definitions, "logical scenario definition directory")
      ->capture_default_str();
  pipe->add_option("--xosc-template", xosc_template_path, "scenario template override");
  pipe->add_option("--parallel", parallel, "worker threads (default from config)");

  auto* verify = app.add_subcommand("verify", "check database consistency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    scenvar::StageOptions opt;
    opt.db_root = db_root;
    opt.filter = filter;
    opt.force = force;
    opt.parallelism = parallel;
    if (!config_path.empty()) {
      opt.config = scenvar::parse_toolkit_config(scenvar::read_text_file(config_path));
    }
    scenvar::XoscTemplate xosc_template;
    if (!xosc_template_path.empty()) {
      xosc_template.text = scenvar::read_text_file(xosc_template_path);
    }

    if (gen->parsed()) {
      return cmd_generate(definitions, opt, std::cout, xosc_template) > 0 ? kExitOk
                                                                          : kExitStageFailure;
    }
    if (sim->parsed()) {
      cmd_simulate(opt, std::cout);
      return kExitOk;
    }
    if (eval->parsed()) {
      cmd_evaluate(opt, std::cout);
      return kExitOk;
    }
    if (rep->parsed()) {
      cmd_report(opt, std::cout);
      return kExitOk;
    }
    if (verify->parsed()) {
      return cmd_verify(opt, std::cout).ok() ? kExitOk : kExitStageFailure;
    }
    if (pipe->parsed()) {
      cmd_pipeline(definitions, opt, std::cout, xosc_template);
      return kExitOk;
    }
  } catch (const scenvar::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailure;
  }
  return kExitUsage;
}
