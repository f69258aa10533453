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

#include <utility>

#include "spdmboot/transport.hpp"

namespace spdmboot {

// Command frame: tag (u16 BE), size (u32 BE, covers tag + size + payload),
// payload. Distinct tags separate clear and secured SPDM traffic.
inline constexpr std::uint16_t kTpmTagClearSpdm = 0x8101;
inline constexpr std::uint16_t kTpmTagSecuredSpdm = 0x8201;
// Artifact-defined error frame tag; the payload is a u32 BE status code.
inline constexpr std::uint16_t kTpmTagError = 0x81ff;
inline constexpr std::size_t kTpmHeaderSize = 6;

Bytes tpm_encode(ByteSpan spdm_message, bool secured);
// Returns payload plus the secured flag; rejects unknown tags and any frame
// whose size field disagrees with the actual length.
Result<std::pair<Bytes, bool>> tpm_decode(ByteSpan frame);
Bytes tpm_error_frame(std::uint32_t code);

// Device-side command sink; the virtual TPM implements this.
class TpmCommandPort {
 public:
  virtual ~TpmCommandPort() = default;
  virtual Bytes handle_command(ByteSpan frame) = 0;
};

class TpmTransport final : public TransportBinding {
 public:
  explicit TpmTransport(TpmCommandPort& port) : port_(port) {}

  Status send_request(ByteSpan message) override;
  Result<Bytes> receive_response() override;
  std::string_view name() const override { return "tpm"; }

 private:
  TpmCommandPort& port_;
  Bytes pending_response_;
  bool response_ready_ = false;
};

}  // namespace spdmboot
