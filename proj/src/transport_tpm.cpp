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

#include "spdmboot/transport_tpm.hpp"

namespace spdmboot {

Bytes tpm_encode(ByteSpan spdm_message, bool secured) {
  ByteWriter w;
  w.u16be(secured ? kTpmTagSecuredSpdm : kTpmTagClearSpdm);
  w.u32be(static_cast<std::uint32_t>(kTpmHeaderSize + spdm_message.size()));
  w.raw(spdm_message);
  return w.take();
}

Result<std::pair<Bytes, bool>> tpm_decode(ByteSpan frame) {
  using R = Result<std::pair<Bytes, bool>>;
  ByteReader r(frame);
  std::uint16_t tag = r.u16be();
  std::uint32_t size = r.u32be();
  if (!r.ok()) return R::failure(status::kMalformedMessage, "truncated command header");
  if (tag != kTpmTagClearSpdm && tag != kTpmTagSecuredSpdm) {
    return R::failure(status::kMalformedMessage, "unknown command tag");
  }
  if (size != frame.size()) {
    return R::failure(status::kMalformedMessage, "size field disagrees with frame length");
  }
  Bytes payload = r.raw(frame.size() - kTpmHeaderSize);
  return std::make_pair(std::move(payload), tag == kTpmTagSecuredSpdm);
}

Bytes tpm_error_frame(std::uint32_t code) {
  ByteWriter w;
  w.u16be(kTpmTagError);
  w.u32be(kTpmHeaderSize + 4);
  w.u32be(code);
  return w.take();
}

Status TpmTransport::send_request(ByteSpan message) {
  Bytes frame = tpm_encode(message, secured());
  tap_filter(FrameDirection::HostToDevice, frame);
  Bytes response = port_.handle_command(frame);
  tap_filter(FrameDirection::DeviceToHost, response);
  pending_response_ = std::move(response);
  response_ready_ = true;
  return ok_status();
}

Result<Bytes> TpmTransport::receive_response() {
  if (!response_ready_) {
    return Result<Bytes>::failure(status::kUnexpectedOrder, "no command in flight");
  }
  response_ready_ = false;
  auto decoded = tpm_decode(pending_response_);
  if (!decoded.ok()) return decoded.error();
  auto [payload, was_secured] = decoded.take();
  if (was_secured != secured())
    return Error{status::kMalformedMessage, "tpm security flag mismatch"};
  return payload;
}

}  // namespace spdmboot
