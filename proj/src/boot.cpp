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

#include "spdmboot/boot.hpp"

#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "spdmboot/certs.hpp"
#include "spdmboot/transport_doe.hpp"
#include "spdmboot/transport_tpm.hpp"
#include "spdmboot/transport_usb.hpp"

namespace spdmboot {
namespace {

std::string hex_code(std::uint32_t code) {
  std::ostringstream out;
  out << "0x" << std::uppercase << std::hex << std::setw(8)
      << std::setfill('0') << code;
  return out.str();
}

}  // namespace

std::string_view to_string(BootPhase phase) {
  switch (phase) {
    case BootPhase::kPreBoot: return "PreBoot";
    case BootPhase::kPei: return "PEI";
    case BootPhase::kDxePcie: return "DXE-PCIe";
    case BootPhase::kDxeUsb: return "DXE-USB";
    case BootPhase::kSmmLock: return "SmmLock";
    case BootPhase::kBootSelect: return "BootSelect";
  }
  return "?";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kIntegrityCheck: return "IntegrityCheck";
    case EventKind::kAuthenticityCheck: return "AuthenticityCheck";
    case EventKind::kSpdmAuth: return "SpdmAuth";
    case EventKind::kSpdmMeasure: return "SpdmMeasure";
    case EventKind::kPcrExtend: return "PcrExtend";
    case EventKind::kQuarantine: return "Quarantine";
    case EventKind::kSmmLock: return "SmmLock";
    case EventKind::kHalt: return "Halt";
    case EventKind::kHandoff: return "Handoff";
  }
  return "?";
}

std::string_view to_string(BootResult result) {
  switch (result) {
    case BootResult::kBooted: return "Booted";
    case BootResult::kHaltedIntegrity: return "HaltedIntegrity";
    case BootResult::kHaltedAuthenticity: return "HaltedAuthenticity";
    case BootResult::kNoBootDevice: return "NoBootDevice";
  }
  return "?";
}

int exit_code_for(BootResult result) {
  switch (result) {
    case BootResult::kBooted: return 0;
    case BootResult::kHaltedIntegrity: return 2;
    case BootResult::kHaltedAuthenticity: return 3;
    case BootResult::kNoBootDevice: return 4;
  }
  return 1;
}

std::string serialize_report(const BootReport& report) {
  std::ostringstream out;
  out << "# boot report\n";
  out << "seed: " << report.seed << "\n";
  out << "spdm: " << (report.spdm_enabled ? 1 : 0) << "\n";
  out << "result: " << to_string(report.result) << "\n";
  out << "boot_device: "
      << (report.boot_device.empty() ? "-" : report.boot_device) << "\n";
  out << "events: " << report.events.size() << "\n";
  for (const auto& e : report.events) {
    out << "event: " << e.sequence_no << " " << to_string(e.phase) << " "
        << to_string(e.kind) << " " << e.subject << " ";
    if (e.pass)
      out << "Pass";
    else
      out << "Fail(" << hex_code(e.code) << ")";
    out << " | " << e.detail << "\n";
  }
  const MetricsSample& m = report.metrics;
  out << "metrics: messages=" << m.spdm_messages_sent
      << " frames=" << m.transport_frames << " hash=" << m.crypto_ops.hash
      << " sign=" << m.crypto_ops.sign << " verify=" << m.crypto_ops.verify
      << " pcr_extends=" << m.pcr_extends
      << " enumeration=" << m.enumeration_steps
      << " simulated_steps=" << m.simulated_steps << "\n";
  return out.str();
}

BootOrchestrator::BootOrchestrator(VirtualPlatform& platform, BootConfig config,
                                   std::ostream* diagnostics)
    : platform_(platform), config_(config), diagnostics_(diagnostics) {}

void BootOrchestrator::emit(BootPhase phase, EventKind kind,
                            std::string subject, bool pass, std::uint32_t code,
                            std::string detail) {
  events_.push_back(BootEvent{next_seq_++, phase, kind, std::move(subject),
                              pass, code, std::move(detail)});
}

void BootOrchestrator::diag(const std::string& line) {
  if (diagnostics_ != nullptr) *diagnostics_ << line << "\n";
}

std::string BootOrchestrator::auth_fail_detail(std::uint32_t code) const {
  return "Authentication - " + hex_code(code);
}

Result<BootOrchestrator::Inputs> BootOrchestrator::load_inputs() const {
  const VariableStore& store = platform_.variables();
  auto get = [&](const std::string& name) -> Result<Bytes> {
    const EfiVariable* v = store.get(platform_guid(), name);
    if (v == nullptr)
      return Error{status::kMissingInput, "variable missing: " + name};
    if (v->data.empty())
      return Error{status::kMissingInput, "variable empty: " + name};
    return v->data;
  };

  Inputs inputs;
  auto pk = get(var::kPk);
  if (!pk.ok()) return pk.error();
  auto pk_key = chain_blob_leaf_key(pk.value());
  if (!pk_key.ok())
    return Error{status::kParseError,
                 "PK variable unreadable: " + pk_key.error().message};
  inputs.pk_public_key = pk_key.take();

  auto expected = get(var::kExpectedHcrtm);
  if (!expected.ok()) return expected.error();
  if (expected.value().size() != kSha256Size)
    return Error{status::kParseError, "ExpectedHcrtm is not a digest"};
  inputs.expected_hcrtm = expected.take();

  auto signature = get(var::kHcrtmSignature);
  if (!signature.ok()) return signature.error();
  inputs.hcrtm_signature = signature.take();

  auto chain = get(var::kRequesterChain);
  if (!chain.ok()) return chain.error();
  inputs.requester_chain = chain.take();

  auto key = get(var::kRequesterKey);
  if (!key.ok()) return key.error();
  inputs.requester_key = key.take();

  if (config_.spdm_enabled) {
    auto tpm_chain = get(var::responder_chain_name("tpm"));
    if (!tpm_chain.ok()) return tpm_chain.error();
    inputs.responder_chains["tpm"] = tpm_chain.take();
    for (const auto& attached : platform_.devices()) {
      auto device_chain = get(var::responder_chain_name(attached.spec.id));
      if (!device_chain.ok()) return device_chain.error();
      inputs.responder_chains[attached.spec.id] = device_chain.take();
    }
  }
  return inputs;
}

bool BootOrchestrator::preboot(const Inputs& inputs) {
  VirtualTpm& tpm = platform_.tpm();
  const Bytes& code = platform_.flash().code_section;
  // The measurement lands in PCR[0] regardless of the comparison outcome.
  tpm.hcrtm_extend(code);
  const Bytes computed = platform_.crypto().sha256(code);
  if (computed != inputs.expected_hcrtm) {
    emit(BootPhase::kPreBoot, EventKind::kIntegrityCheck, "firmware", false,
         status::kFirmwareIntegrity, kHaltIntegrity);
    diag(kHaltIntegrity);
    result_ = BootResult::kHaltedIntegrity;
    return false;
  }
  emit(BootPhase::kPreBoot, EventKind::kIntegrityCheck, "firmware", true, 0,
       "firmware digest matches ExpectedHcrtm");
  if (!platform_.crypto().verify(inputs.expected_hcrtm,
                                 inputs.hcrtm_signature,
                                 inputs.pk_public_key)) {
    emit(BootPhase::kPreBoot, EventKind::kAuthenticityCheck, "firmware",
         false, status::kFirmwareAuthenticity, kHaltAuthenticity);
    diag(kHaltAuthenticity);
    result_ = BootResult::kHaltedAuthenticity;
    return false;
  }
  emit(BootPhase::kPreBoot, EventKind::kAuthenticityCheck, "firmware", true,
       0, "HcrtmSignature verifies under PK");
  return true;
}

void BootOrchestrator::run_pei(const Inputs& inputs) {
  ++enumeration_steps_;  // locating the TPM
  TpmTransport transport(platform_.tpm());
  transport.set_tap(&tap_);
  SpdmRequester requester(inputs.requester_chain, inputs.requester_key,
                          platform_.crypto(), platform_.rng(), &digest_cache_,
                          &message_count_);
  requester.set_expected_peer_chain(inputs.responder_chains.at("tpm"));
  auto st = requester.init_connection(transport);
  if (st.ok()) st = requester.authenticate(transport);
  if (!st.ok()) {
    // TPM auth failure is logged and boot continues.
    const std::uint32_t code = st.error().code;
    emit(BootPhase::kPei, EventKind::kSpdmAuth, "tpm", false, code,
         auth_fail_detail(code));
    diag(auth_fail_detail(code));
    return;
  }
  emit(BootPhase::kPei, EventKind::kSpdmAuth, "tpm", true, 0,
       "challenge-auth");
  auto mutual = requester.run_basic_mutual_auth(transport);
  if (!mutual.ok()) {
    const std::uint32_t code = mutual.error().code;
    emit(BootPhase::kPei, EventKind::kSpdmAuth, "tpm", false, code,
         auth_fail_detail(code));
    diag(auth_fail_detail(code));
    return;
  }
  emit(BootPhase::kPei, EventKind::kSpdmAuth, "tpm", true, 0, "mutual-auth");
}

void BootOrchestrator::run_dxe(const Inputs& inputs, BusKind bus,
                               BootPhase phase) {
  for (auto& attached : platform_.devices()) {
    if (attached.spec.bus != bus || attached.spec.hotplug_after_smm_lock)
      continue;
    ++enumeration_steps_;
    VirtualDevice& device = *attached.device;
    const std::string& id = attached.spec.id;
    if (!config_.spdm_enabled) {
      device.mark_initialized();
      continue;
    }
    // Control-plane touch before any SPDM traffic: descriptor fetch on USB,
    // discovery object on DOE.
    if (bus == BusKind::kUsb) {
      UsbSetupPacket setup{kUsbDirInStandard, kUsbGetDescriptor, 0x0100, 0,
                           18};
      (void)device.control_transfer(setup, {});
    } else {
      (void)device.mailbox_write(doe_encode_object(kDoeTypeDiscovery, {}));
      (void)device.mailbox_read();
    }

    std::unique_ptr<TransportBinding> transport;
    if (bus == BusKind::kPcie)
      transport = std::make_unique<DoeTransport>(device);
    else
      transport = std::make_unique<UsbTransport>(device);
    transport->set_tap(&tap_);

    SpdmRequester requester(inputs.requester_chain, inputs.requester_key,
                            platform_.crypto(), platform_.rng(),
                            &digest_cache_, &message_count_);
    requester.set_expected_peer_chain(inputs.responder_chains.at(id));

    auto fail_device = [&](std::uint32_t code) {
      const std::string detail = auth_fail_detail(code);
      emit(phase, EventKind::kSpdmAuth, id, false, code, detail);
      diag(detail);
      device.quarantine();
      emit(phase, EventKind::kQuarantine, id, true, 0,
           "device quarantined; buffers discarded");
    };

    auto st = requester.init_connection(*transport);
    if (st.ok()) st = requester.authenticate(*transport);
    if (!st.ok()) {
      fail_device(st.error().code);
      continue;
    }
    emit(phase, EventKind::kSpdmAuth, id, true, 0, "challenge-auth");

    auto measurements = requester.get_measurements(*transport);
    if (!measurements.ok()) {
      fail_device(measurements.error().code);
      continue;
    }
    emit(phase, EventKind::kSpdmMeasure, id, true, 0,
         "measurements verified");

    auto session = requester.establish_session(*transport, true);
    if (!session.ok()) {
      fail_device(session.error().code);
      continue;
    }

    platform_.tpm().extend_pcr(kPcrDeviceCert,
                               requester.challenge_transcript_hash(),
                               "spdm-cert:" + id);
    emit(phase, EventKind::kPcrExtend, id, true, 0,
         "pcr2 <- challenge transcript");
    platform_.tpm().extend_pcr(kPcrDeviceMeasure,
                               requester.measurement_transcript_hash(),
                               "spdm-measure:" + id);
    emit(phase, EventKind::kPcrExtend, id, true, 0,
         "pcr3 <- measurement transcript");
    device.mark_initialized();
  }
}

void BootOrchestrator::smm_lock_and_hotplug() {
  emit(BootPhase::kSmmLock, EventKind::kSmmLock, "platform", true, 0,
       "smm locked; usb attach disabled");
  for (auto& attached : platform_.devices()) {
    if (!attached.spec.hotplug_after_smm_lock) continue;
    ++enumeration_steps_;
    attached.device->quarantine();
    emit(BootPhase::kSmmLock, EventKind::kQuarantine, attached.spec.id, false,
         status::kSmmLocked, "usb hot-plug rejected: smm locked");
  }
}

void BootOrchestrator::boot_select() {
  for (auto& attached : platform_.devices()) {
    if (!attached.spec.bootable) continue;
    if (!attached.device->initialized()) continue;
    boot_device_ = attached.spec.id;
    emit(BootPhase::kBootSelect, EventKind::kHandoff, boot_device_, true, 0,
         "boot device selected; handing off");
    result_ = BootResult::kBooted;
    return;
  }
  emit(BootPhase::kBootSelect, EventKind::kHandoff, "platform", false,
       status::kNoBootDevice, "no initialized boot device");
  result_ = BootResult::kNoBootDevice;
}

MetricsSample BootOrchestrator::collect_metrics() const {
  MetricsSample m;
  m.spdm_messages_sent = message_count_;
  m.transport_frames = tap_.records().size();
  m.crypto_ops.hash = platform_.crypto().hash_ops();
  m.crypto_ops.sign = platform_.crypto().sign_ops();
  m.crypto_ops.verify = platform_.crypto().verify_ops();
  m.pcr_extends = platform_.tpm().extend_count() - extend_base_;
  m.enumeration_steps = enumeration_steps_;
  m.simulated_steps = m.spdm_messages_sent + m.transport_frames +
                      m.crypto_ops.total() + m.pcr_extends +
                      m.enumeration_steps;
  return m;
}

Result<BootReport> BootOrchestrator::run() {
  auto inputs = load_inputs();
  if (!inputs.ok()) return inputs.error();

  platform_.tpm().power_cycle();
  platform_.crypto().reset_counters();
  tap_.clear();
  events_.clear();
  next_seq_ = 1;
  message_count_ = 0;
  enumeration_steps_ = 0;
  extend_base_ = platform_.tpm().extend_count();
  result_ = BootResult::kBooted;
  boot_device_.clear();

  if (preboot(inputs.value())) {
    if (config_.spdm_enabled) run_pei(inputs.value());
    run_dxe(inputs.value(), BusKind::kPcie, BootPhase::kDxePcie);
    run_dxe(inputs.value(), BusKind::kUsb, BootPhase::kDxeUsb);
    smm_lock_and_hotplug();
    boot_select();
  }

  BootReport report;
  report.seed = config_.seed;
  report.spdm_enabled = config_.spdm_enabled;
  report.events = events_;
  report.result = result_;
  report.boot_device = boot_device_;
  report.metrics = collect_metrics();
  return report;
}

}  // namespace spdmboot
