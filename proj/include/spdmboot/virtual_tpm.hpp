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

#include <map>
#include <string>
#include <vector>

#include "spdmboot/spdm_responder.hpp"
#include "spdmboot/transport_tpm.hpp"

namespace spdmboot {

inline constexpr std::size_t kPcrCount = 24;
// Registers reserved for the boot flow: 0 holds the firmware root
// measurement, 2 collects device certificate transcripts, 3 collects
// device measurement transcripts.
inline constexpr std::size_t kPcrHcrtm = 0;
inline constexpr std::size_t kPcrDeviceCert = 2;
inline constexpr std::size_t kPcrDeviceMeasure = 3;

// SHA-256 PCR bank, append-only event log, named NV slots extended with the
// same fold, and an embedded protocol responder reachable through TPM
// command frames.
class VirtualTpm final : public TpmCommandPort {
 public:
  struct NvLogEntry {
    // -1 marks named-slot extensions; 0..23 are PCR extensions.
    int pcr_index = -1;
    std::string slot;
    Bytes extended_digest;
    std::string event;
  };

  VirtualTpm(std::string id, Bytes cert_chain_blob, Bytes private_key,
             Bytes trusted_requester_chain_blob,
             std::vector<MeasurementBlock> measurements,
             CryptoProvider& crypto, RandomSource& rng,
             ResponderConfig config = {});

  // new = H(old || H(data)). The log grows by one entry per extend.
  Status extend_pcr(std::size_t index, ByteSpan data, std::string_view event);
  // PCR[0] = H(0x04 || H(data)), computed from the zero register exactly
  // once per power-on.
  Status hcrtm_extend(ByteSpan data);
  Status nv_extend(const std::string& slot, ByteSpan data,
                   std::string_view event);

  Result<Bytes> read_pcr(std::size_t index) const;
  Result<Bytes> nv_read(const std::string& slot) const;
  const std::vector<NvLogEntry>& nv_log() const { return nv_log_; }
  bool hcrtm_done() const { return hcrtm_done_; }
  std::size_t extend_count() const { return extend_count_; }

  // Volatile state (PCRs, once-per-boot latch) resets; the log and NV slots
  // survive.
  void power_cycle();

  SpdmResponder& responder() { return responder_; }
  const SpdmResponder& responder() const { return responder_; }

  Bytes handle_command(ByteSpan frame) override;

 private:
  Bytes fold(ByteSpan old_value, ByteSpan data);

  CryptoProvider& crypto_;
  SpdmResponder responder_;
  std::vector<Bytes> pcrs_;
  std::map<std::string, Bytes> nv_slots_;
  std::vector<NvLogEntry> nv_log_;
  bool hcrtm_done_ = false;
  std::size_t extend_count_ = 0;
};

}  // namespace spdmboot
