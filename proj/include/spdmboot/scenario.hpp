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

#pragma once

#include <iosfwd>

#include "spdmboot/boot.hpp"

namespace spdmboot {

// Everything minted for one simulated machine, before any tampering.
struct ProvisionedSystem {
  PlatformAnchors anchors;
  ProvisionedIdentities identities;
  std::unique_ptr<VirtualPlatform> platform;
};

Result<ProvisionedSystem> provision_system(std::uint64_t seed,
                                           const Topology& topology);

// The four boot outcomes exercised by the harness:
//   1  clean boot
//   2  code section edited after provisioning (integrity halt)
//   3  boot-code digest re-signed with an unrecognized key
//      (authenticity halt)
//   4  firmware SPDM certificate variable tampered (every device rejects
//      the requester, nothing bootable remains)
struct ScenarioConfig {
  int scenario_id = 1;
  std::uint64_t seed = 0;
  Topology topology = default_topology();
  bool spdm_enabled = true;
};

struct ScenarioRun {
  BootReport report;
  std::string report_text;
  Bytes final_pcr0;
  Bytes final_pcr2;
  Bytes final_pcr3;
  // Flash contents at boot time (post-tamper for scenario 2).
  Bytes code_section;
};

Result<ScenarioRun> run_scenario(const ScenarioConfig& config,
                                 std::ostream* diagnostics = nullptr);

// ---- metrics aggregation ----

struct MetricsSeries {
  std::string label;
  std::vector<double> samples;
};

double series_mean(const std::vector<double>& samples);
// Population standard deviation.
double series_stddev(const std::vector<double>& samples);

struct FilterOutcome {
  MetricsSeries filtered;
  std::size_t removed = 0;
  double removal_fraction = 0.0;
};

// Drops samples with |x - mean| / stddev > threshold. A zero-stddev series
// passes through untouched.
FilterOutcome zscore_filter(const MetricsSeries& series,
                            double threshold = 2.0);

struct OverheadLine {
  std::string metric;
  double mean_with = 0.0;
  double stddev_with = 0.0;
  double mean_without = 0.0;
  double stddev_without = 0.0;
  // (mean_with - mean_without) / mean_without; absent when the baseline
  // mean is zero.
  bool has_overhead = false;
  double overhead = 0.0;
  std::size_t removed_with = 0;
  std::size_t removed_without = 0;
};

struct OverheadReport {
  std::size_t runs_with = 0;
  std::size_t runs_without = 0;
  std::vector<OverheadLine> lines;
};

// Filters both sides per metric, then compares means. Metrics compared:
// simulated_steps, spdm_messages_sent, crypto_ops (total).
Result<OverheadReport> compare_runs(const std::vector<MetricsSample>& with_spdm,
                                    const std::vector<MetricsSample>& without_spdm,
                                    double threshold = 2.0);

std::string render_overhead_report(const OverheadReport& report);

}  // namespace spdmboot
