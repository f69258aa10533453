// Copyright 2026 the spdmboot authors
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

#include "spdmboot/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "spdmboot/scenario.hpp"

namespace spdmboot {
namespace {

Result<Topology> load_topology(const std::string& path) {
  if (path.empty()) return default_topology();
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return Error{status::kMissingInput, "cannot open topology file: " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str());
}

int emit_scenario_result(const ScenarioRun& run,
                         const std::string& report_path, std::ostream& out,
                         std::ostream& err) {
  if (!report_path.empty()) {
    std::ofstream file(report_path, std::ios::binary);
    if (!file) {
      err << "cannot write report file: " << report_path << "\n";
      return 74;
    }
    file << run.report_text;
  } else {
    out << run.report_text;
  }
  return exit_code_for(run.report.result);
}

int do_provision(std::uint64_t seed, const Topology& topology,
                 const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
  auto system = provision_system(seed, topology);
  if (!system.ok()) {
    err << "provision failed: " << system.error().message << "\n";
    return 70;
  }
  const VirtualPlatform& platform = *system.value().platform;
  const std::string base = out_dir.empty() ? "." : out_dir;
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) {
    err << "cannot create " << base << "\n";
    return 74;
  }
  auto write_file = [&](const std::string& name,
                        const std::string& contents) -> bool {
    const std::string path = base + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "cannot write " << path << "\n";
      return false;
    }
    f << contents;
    out << "wrote " << path << "\n";
    return true;
  };
  if (!write_file("variables.txt", serialize_store(platform.variables())))
    return 74;
  if (!write_file("topology.txt", serialize_topology(topology))) return 74;
  const Bytes& code = system.value().platform->flash().code_section;
  if (!write_file("code.bin",
                  std::string(code.begin(), code.end())))
    return 74;
  return 0;
}

int do_report(int scenario_id, std::uint64_t seed, std::size_t runs,
              const Topology& topology, std::ostream& out, std::ostream& err) {
  std::vector<MetricsSample> with_spdm;
  std::vector<MetricsSample> without_spdm;
  for (std::size_t i = 0; i < runs; ++i) {
    ScenarioConfig config{scenario_id, seed + i, topology, true};
    auto run = run_scenario(config, nullptr);
    if (!run.ok()) {
      err << "scenario run failed: " << run.error().message << "\n";
      return 70;
    }
    with_spdm.push_back(run.value().report.metrics);
    config.spdm_enabled = false;
    auto baseline = run_scenario(config, nullptr);
    if (!baseline.ok()) {
      err << "baseline run failed: " << baseline.error().message << "\n";
      return 70;
    }
    without_spdm.push_back(baseline.value().report.metrics);
  }
  auto comparison = compare_runs(with_spdm, without_spdm);
  if (!comparison.ok()) {
    err << "comparison failed: " << comparison.error().message << "\n";
    return 70;
  }
  out << render_overhead_report(comparison.value());
  return 0;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"SPDM-protected boot simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string topology_path;
  std::string report_path;
  std::string out_dir = ".";
  bool no_spdm = false;
  int scenario_id = 1;
  std::size_t runs = 100;

  auto add_common = [&](CLI::App* cmd, bool with_report) {
    cmd->add_option("--seed", seed, "deterministic seed");
    cmd->add_option("--topology", topology_path, "topology file");
    if (with_report) {
      cmd->add_flag("--no-spdm", no_spdm, "skip all SPDM exchanges");
      cmd->add_option("--report", report_path, "write the boot report here");
    }
  };

  CLI::App* provision = app.add_subcommand(
      "provision", "generate keys, flash image, and variable store");
  add_common(provision, false);
  provision->add_option("--out", out_dir, "output directory");

  CLI::App* run_cmd =
      app.add_subcommand("run", "boot once from provisioned state");
  add_common(run_cmd, true);

  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "run one of the four boot scenarios");
  scenario_cmd->add_option("id", scenario_id, "scenario id")
      ->required()
      ->check(CLI::Range(1, 4));
  add_common(scenario_cmd, true);

  CLI::App* report_cmd = app.add_subcommand(
      "report", "aggregate runs and compare SPDM vs baseline");
  add_common(report_cmd, false);
  report_cmd->add_option("--runs", runs, "runs per side")
      ->check(CLI::Range(static_cast<std::size_t>(1),
                         static_cast<std::size_t>(1000000)));
  report_cmd->add_option("--scenario", scenario_id, "scenario id")
      ->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 64;
  }

  auto topology = load_topology(topology_path);
  if (!topology.ok()) {
    err << "topology error: " << topology.error().message << "\n";
    return 64;
  }

  if (provision->parsed())
    return do_provision(seed, topology.value(), out_dir, out, err);

  if (run_cmd->parsed() || scenario_cmd->parsed()) {
    const int id = scenario_cmd->parsed() ? scenario_id : 1;
    ScenarioConfig config{id, seed, topology.value(), !no_spdm};
    auto run = run_scenario(config, &err);
    if (!run.ok()) {
      err << "boot failed: " << run.error().message << "\n";
      return 70;
    }
    return emit_scenario_result(run.value(), report_path, out, err);
  }

  if (report_cmd->parsed())
    return do_report(scenario_id, seed, runs, topology.value(), out, err);

  err << "usage error: no subcommand\n";
  return 64;
}

}  // namespace spdmboot
