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
#include <string>
#include <vector>

#include "spdmboot/platform.hpp"
#include "spdmboot/spdm_requester.hpp"

namespace spdmboot {

// Halt diagnostics are matched verbatim by callers; do not reword.
inline constexpr const char* kHaltIntegrity =
    "SECURITY ERROR - FIRMWARE MODIFIED";
inline constexpr const char* kHaltAuthenticity =
    "Error verifying firmware hash - Public Key signature verification has "
    "failed";

enum class BootPhase : std::uint8_t {
  kPreBoot,
  kPei,
  kDxePcie,
  kDxeUsb,
  kSmmLock,
  kBootSelect,
};

enum class EventKind : std::uint8_t {
  kIntegrityCheck,
  kAuthenticityCheck,
  kSpdmAuth,
  kSpdmMeasure,
  kPcrExtend,
  kQuarantine,
  kSmmLock,
  // Halts are carried as failing Integrity/Authenticity events; the kind is
  // kept for report readers.
  kHalt,
  kHandoff,
};

enum class BootResult : std::uint8_t {
  kBooted,
  kHaltedIntegrity,
  kHaltedAuthenticity,
  kNoBootDevice,
};

std::string_view to_string(BootPhase phase);
std::string_view to_string(EventKind kind);
std::string_view to_string(BootResult result);

struct BootEvent {
  std::uint32_t sequence_no = 0;
  BootPhase phase = BootPhase::kPreBoot;
  EventKind kind = EventKind::kIntegrityCheck;
  std::string subject;
  bool pass = true;
  // Failure code; zero on pass.
  std::uint32_t code = 0;
  std::string detail;
  bool operator==(const BootEvent&) const = default;
};

struct CryptoOpsSample {
  std::uint64_t hash = 0;
  std::uint64_t sign = 0;
  std::uint64_t verify = 0;
  std::uint64_t total() const { return hash + sign + verify; }
  bool operator==(const CryptoOpsSample&) const = default;
};

struct MetricsSample {
  std::uint64_t spdm_messages_sent = 0;
  std::uint64_t transport_frames = 0;
  CryptoOpsSample crypto_ops;
  std::uint64_t pcr_extends = 0;
  std::uint64_t enumeration_steps = 0;
  // messages + frames + crypto ops + PCR extends + enumeration steps; the
  // deterministic stand-in for instruction counts.
  std::uint64_t simulated_steps = 0;
  bool operator==(const MetricsSample&) const = default;
};

struct BootReport {
  std::uint64_t seed = 0;
  bool spdm_enabled = true;
  std::vector<BootEvent> events;
  BootResult result = BootResult::kBooted;
  std::string boot_device;
  MetricsSample metrics;
  bool operator==(const BootReport&) const = default;
};

struct BootConfig {
  bool spdm_enabled = true;
  // Echoed into the report; the platform already carries the live RNG.
  std::uint64_t seed = 0;
};

// Drives one power-on: pre-boot firmware verification, PEI TPM mutual
// authentication, DXE enumeration with per-device SPDM, the SMM lock, and
// boot selection. Missing or unreadable variables surface as errors before
// any event is recorded.
class BootOrchestrator {
 public:
  BootOrchestrator(VirtualPlatform& platform, BootConfig config,
                   std::ostream* diagnostics = nullptr);

  Result<BootReport> run();

 private:
  struct Inputs {
    Bytes pk_public_key;
    Bytes expected_hcrtm;
    Bytes hcrtm_signature;
    Bytes requester_chain;
    Bytes requester_key;
    std::map<std::string, Bytes> responder_chains;
  };

  Result<Inputs> load_inputs() const;
  void emit(BootPhase phase, EventKind kind, std::string subject, bool pass,
            std::uint32_t code, std::string detail);
  void diag(const std::string& line);
  // True to continue the boot, false to halt.
  bool preboot(const Inputs& inputs);
  void run_pei(const Inputs& inputs);
  void run_dxe(const Inputs& inputs, BusKind bus, BootPhase phase);
  void smm_lock_and_hotplug();
  void boot_select();
  MetricsSample collect_metrics() const;
  std::string auth_fail_detail(std::uint32_t code) const;

  VirtualPlatform& platform_;
  BootConfig config_;
  std::ostream* diagnostics_;

  std::vector<BootEvent> events_;
  BootResult result_ = BootResult::kBooted;
  std::string boot_device_;
  std::uint32_t next_seq_ = 1;
  std::uint64_t message_count_ = 0;
  std::uint64_t enumeration_steps_ = 0;
  std::uint64_t extend_base_ = 0;
  TransportTap tap_;
  DigestCache digest_cache_;
};

std::string serialize_report(const BootReport& report);
int exit_code_for(BootResult result);

}  // namespace spdmboot
