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

#include "spdmboot/virtual_tpm.hpp"

namespace spdmboot {

VirtualTpm::VirtualTpm(std::string id, Bytes cert_chain_blob,
                       Bytes private_key, Bytes trusted_requester_chain_blob,
                       std::vector<MeasurementBlock> measurements,
                       CryptoProvider& crypto, RandomSource& rng,
                       ResponderConfig config)
    : crypto_(crypto),
      responder_(std::move(id), std::move(cert_chain_blob),
                 std::move(private_key),
                 std::move(trusted_requester_chain_blob),
                 std::move(measurements), crypto, rng, std::move(config)),
      pcrs_(kPcrCount, Bytes(kSha256Size, 0)) {}

Bytes VirtualTpm::fold(ByteSpan old_value, ByteSpan data) {
  const Bytes event_digest = crypto_.sha256(data);
  return crypto_.sha256(concat({old_value, ByteSpan(event_digest)}));
}

Status VirtualTpm::extend_pcr(std::size_t index, ByteSpan data,
                              std::string_view event) {
  if (index >= kPcrCount)
    return fail_status(status::kOverflow, "pcr index out of range");
  pcrs_[index] = fold(pcrs_[index], data);
  nv_log_.push_back(NvLogEntry{static_cast<int>(index), {}, pcrs_[index],
                               std::string(event)});
  ++extend_count_;
  return ok_status();
}

Status VirtualTpm::hcrtm_extend(ByteSpan data) {
  if (hcrtm_done_)
    return fail_status(status::kUnexpectedOrder,
                       "hcrtm already performed this power-on");
  const Bytes code_digest = crypto_.sha256(data);
  const std::uint8_t locality = 0x04;
  pcrs_[kPcrHcrtm] =
      crypto_.sha256(concat({ByteSpan(&locality, 1), ByteSpan(code_digest)}));
  hcrtm_done_ = true;
  nv_log_.push_back(NvLogEntry{static_cast<int>(kPcrHcrtm), {},
                               pcrs_[kPcrHcrtm], "hcrtm"});
  ++extend_count_;
  return ok_status();
}

Status VirtualTpm::nv_extend(const std::string& slot, ByteSpan data,
                             std::string_view event) {
  if (slot.empty())
    return fail_status(status::kMissingInput, "nv slot name empty");
  auto it = nv_slots_.find(slot);
  if (it == nv_slots_.end())
    it = nv_slots_.emplace(slot, Bytes(kSha256Size, 0)).first;
  it->second = fold(it->second, data);
  nv_log_.push_back(NvLogEntry{-1, slot, it->second, std::string(event)});
  return ok_status();
}

Result<Bytes> VirtualTpm::read_pcr(std::size_t index) const {
  if (index >= kPcrCount)
    return Error{status::kOverflow, "pcr index out of range"};
  return pcrs_[index];
}

Result<Bytes> VirtualTpm::nv_read(const std::string& slot) const {
  auto it = nv_slots_.find(slot);
  if (it == nv_slots_.end())
    return Error{status::kMissingInput, "nv slot not present"};
  return it->second;
}

void VirtualTpm::power_cycle() {
  for (auto& pcr : pcrs_) pcr.assign(kSha256Size, 0);
  hcrtm_done_ = false;
}

Bytes VirtualTpm::handle_command(ByteSpan frame) {
  auto decoded = tpm_decode(frame);
  if (!decoded.ok()) return tpm_error_frame(decoded.error().code);
  auto [payload, secured] = decoded.take();
  const Bytes response = responder_.dispatch(payload);
  return tpm_encode(response, secured);
}

}  // namespace spdmboot
