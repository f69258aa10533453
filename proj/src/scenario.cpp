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

#include "spdmboot/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace spdmboot {

Result<ProvisionedSystem> provision_system(std::uint64_t seed,
                                           const Topology& topology) {
  SeededRandom rng(seed);
  const Bytes code_section = rng.bytes(1024);

  IdentityConfig identity_config;
  auto anchors = generate_platform_anchors(identity_config, code_section, rng);
  if (!anchors.ok()) return anchors.error();

  ProvisionedIdentities identities;
  auto requester =
      generate_endpoint_identity("host-firmware", identity_config, rng);
  if (!requester.ok()) return requester.error();
  identities.requester = requester.take();
  auto tpm = generate_endpoint_identity("tpm", identity_config, rng);
  if (!tpm.ok()) return tpm.error();
  identities.tpm = tpm.take();
  std::vector<std::pair<std::string, Bytes>> responder_chains;
  responder_chains.emplace_back("tpm", identities.tpm.chain_blob);
  for (const auto& spec : topology.devices) {
    auto identity = generate_endpoint_identity(spec.id, identity_config, rng);
    if (!identity.ok()) return identity.error();
    responder_chains.emplace_back(spec.id, identity.value().chain_blob);
    identities.devices.emplace(spec.id, identity.take());
  }

  VariableStore store;
  auto provisioned =
      provision_store(store, platform_guid(), anchors.value().anchors,
                      anchors.value().hcrtm, identities.requester,
                      responder_chains);
  if (!provisioned.ok()) return provisioned.error();
  store.write_protect();

  FlashImage flash{code_section, std::move(store)};
  auto platform =
      VirtualPlatform::create(std::move(flash), topology, identities, seed);
  if (!platform.ok()) return platform.error();

  ProvisionedSystem system;
  system.anchors = anchors.take();
  system.identities = std::move(identities);
  system.platform = platform.take();
  return system;
}

namespace {

Status apply_tamper(int scenario_id, ProvisionedSystem& system,
                    std::uint64_t seed) {
  VirtualPlatform& platform = *system.platform;
  switch (scenario_id) {
    case 1:
      return ok_status();
    case 2:
      // Post-provisioning firmware edit; ExpectedHcrtm keeps the old digest.
      platform.flash().code_section[0] ^= 0xff;
      return ok_status();
    case 3: {
      // Digest intact, signature minted by a key outside the trust anchors.
      SeededRandom rogue_rng(seed ^ 0x524f475545ull);
      const KeyPair rogue = rsa2048_generate(rogue_rng);
      const EfiVariable* expected =
          platform.variables().get(platform_guid(), var::kExpectedHcrtm);
      if (expected == nullptr)
        return fail_status(status::kMissingInput, "ExpectedHcrtm missing");
      auto signature = rsa_sign(expected->data, rogue.private_key);
      if (!signature.ok()) return Status(signature.error());
      auto tampered = tamper_variable(
          platform.variables(), platform_guid(), var::kHcrtmSignature,
          [&](Bytes& data) { data = signature.value(); });
      if (!tampered.ok()) return Status(tampered.error());
      platform.variables() = tampered.take();
      return ok_status();
    }
    case 4: {
      auto tampered = tamper_variable(
          platform.variables(), platform_guid(), var::kRequesterChain,
          [](Bytes& data) { data[0] ^= 0xff; });
      if (!tampered.ok()) return Status(tampered.error());
      platform.variables() = tampered.take();
      return ok_status();
    }
    default:
      return fail_status(status::kParseError,
                         "unknown scenario id: " +
                             std::to_string(scenario_id));
  }
}

}  // namespace

Result<ScenarioRun> run_scenario(const ScenarioConfig& config,
                                 std::ostream* diagnostics) {
  auto system = provision_system(config.seed, config.topology);
  if (!system.ok()) return system.error();
  auto tampered =
      apply_tamper(config.scenario_id, system.value(), config.seed);
  if (!tampered.ok()) return tampered.error();

  VirtualPlatform& platform = *system.value().platform;
  BootConfig boot_config{config.spdm_enabled, config.seed};
  BootOrchestrator orchestrator(platform, boot_config, diagnostics);
  auto report = orchestrator.run();
  if (!report.ok()) return report.error();

  ScenarioRun run;
  run.report = report.take();
  run.report_text = serialize_report(run.report);
  run.final_pcr0 = platform.tpm().read_pcr(kPcrHcrtm).value();
  run.final_pcr2 = platform.tpm().read_pcr(kPcrDeviceCert).value();
  run.final_pcr3 = platform.tpm().read_pcr(kPcrDeviceMeasure).value();
  run.code_section = platform.flash().code_section;
  return run;
}

double series_mean(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double x : samples) sum += x;
  return sum / static_cast<double>(samples.size());
}

double series_stddev(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  const double mean = series_mean(samples);
  double acc = 0.0;
  for (double x : samples) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

FilterOutcome zscore_filter(const MetricsSeries& series, double threshold) {
  FilterOutcome outcome;
  outcome.filtered.label = series.label;
  const double stddev = series_stddev(series.samples);
  if (stddev == 0.0 || series.samples.empty()) {
    outcome.filtered.samples = series.samples;
    return outcome;
  }
  const double mean = series_mean(series.samples);
  for (double x : series.samples) {
    const double z = (x - mean) / stddev;
    if (std::abs(z) > threshold)
      ++outcome.removed;
    else
      outcome.filtered.samples.push_back(x);
  }
  outcome.removal_fraction = static_cast<double>(outcome.removed) /
                             static_cast<double>(series.samples.size());
  return outcome;
}

namespace {

std::vector<double> metric_samples(const std::vector<MetricsSample>& runs,
                                   double (*pick)(const MetricsSample&)) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& m : runs) out.push_back(pick(m));
  return out;
}

}  // namespace

Result<OverheadReport> compare_runs(
    const std::vector<MetricsSample>& with_spdm,
    const std::vector<MetricsSample>& without_spdm, double threshold) {
  if (with_spdm.empty() || without_spdm.empty())
    return Error{status::kMissingInput,
                 "overhead comparison needs samples on both sides"};

  struct Metric {
    const char* name;
    double (*pick)(const MetricsSample&);
  };
  const Metric metrics[] = {
      {"simulated_steps",
       [](const MetricsSample& m) {
         return static_cast<double>(m.simulated_steps);
       }},
      {"spdm_messages_sent",
       [](const MetricsSample& m) {
         return static_cast<double>(m.spdm_messages_sent);
       }},
      {"crypto_ops",
       [](const MetricsSample& m) {
         return static_cast<double>(m.crypto_ops.total());
       }},
  };

  OverheadReport report;
  report.runs_with = with_spdm.size();
  report.runs_without = without_spdm.size();
  for (const auto& metric : metrics) {
    auto with_filtered = zscore_filter(
        {metric.name, metric_samples(with_spdm, metric.pick)}, threshold);
    auto without_filtered = zscore_filter(
        {metric.name, metric_samples(without_spdm, metric.pick)}, threshold);
    if (with_filtered.filtered.samples.empty() ||
        without_filtered.filtered.samples.empty())
      return Error{status::kMissingInput,
                   std::string("filter left no samples for ") + metric.name};
    OverheadLine line;
    line.metric = metric.name;
    line.mean_with = series_mean(with_filtered.filtered.samples);
    line.stddev_with = series_stddev(with_filtered.filtered.samples);
    line.mean_without = series_mean(without_filtered.filtered.samples);
    line.stddev_without = series_stddev(without_filtered.filtered.samples);
    line.removed_with = with_filtered.removed;
    line.removed_without = without_filtered.removed;
    if (line.mean_without != 0.0) {
      line.has_overhead = true;
      line.overhead =
          (line.mean_with - line.mean_without) / line.mean_without;
    }
    report.lines.push_back(std::move(line));
  }
  return report;
}

std::string render_overhead_report(const OverheadReport& report) {
  std::ostringstream out;
  out << "# overhead report\n";
  out << "runs: " << report.runs_with << " with spdm, " << report.runs_without
      << " without\n";
  out << std::left << std::setw(20) << "metric" << std::setw(26)
      << "with spdm" << std::setw(26) << "without spdm"
      << "overhead\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& line : report.lines) {
    std::ostringstream with_s, without_s;
    with_s << std::fixed << std::setprecision(2) << line.mean_with << " ± "
           << line.stddev_with;
    without_s << std::fixed << std::setprecision(2) << line.mean_without
              << " ± " << line.stddev_without;
    out << std::left << std::setw(20) << line.metric << std::setw(26)
        << with_s.str() << std::setw(26) << without_s.str();
    if (line.has_overhead)
      out << line.overhead * 100.0 << "%";
    else
      out << "n/a";
    out << "\n";
  }
  out << "outliers_removed:";
  for (const auto& line : report.lines) {
    out << " " << line.metric << "=" << line.removed_with << "/"
        << line.removed_without;
  }
  out << "\n";
  return out.str();
}

}  // namespace spdmboot
