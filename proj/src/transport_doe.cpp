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

#include "spdmboot/transport_doe.hpp"

#include <algorithm>
#include <cstring>

namespace spdmboot {
namespace {

constexpr std::size_t kWriteChunk = 64;

std::size_t padded_payload(std::size_t n) { return (n + 3u) & ~std::size_t{3}; }

}  // namespace

Bytes doe_encode_object(std::uint8_t data_object_type, ByteSpan payload) {
  const std::size_t padded = padded_payload(payload.size());
  const std::uint32_t length_dwords =
      static_cast<std::uint32_t>((kDoeHeaderSize + padded) / 4);
  ByteWriter w;
  w.u32le(static_cast<std::uint32_t>(kDoeVendorId) |
          (static_cast<std::uint32_t>(data_object_type) << 16));
  w.u32le(length_dwords);
  w.u32le(static_cast<std::uint32_t>(payload.size()));
  w.raw(payload);
  for (std::size_t i = payload.size(); i < padded; ++i) w.u8(0);
  return w.take();
}

Bytes doe_encode(ByteSpan spdm_message, bool secured) {
  return doe_encode_object(secured ? kDoeTypeSecuredSpdm : kDoeTypeSpdm,
                           spdm_message);
}

Result<DoeHeader> doe_parse_header(ByteSpan bytes) {
  if (bytes.size() < kDoeHeaderSize)
    return Error{status::kMalformedMessage, "doe header truncated"};
  ByteReader r(bytes.subspan(0, kDoeHeaderSize));
  const std::uint32_t dword0 = r.u32le();
  const std::uint32_t dword1 = r.u32le();
  DoeHeader h;
  h.vendor_id = static_cast<std::uint16_t>(dword0 & 0xffffu);
  h.data_object_type = static_cast<std::uint8_t>((dword0 >> 16) & 0xffu);
  h.length_dwords = dword1 & 0x3ffffu;
  if ((dword0 >> 24) != 0)
    return Error{status::kMalformedMessage, "doe header reserved bits set"};
  if (h.length_dwords < kDoeHeaderSize / 4)
    return Error{status::kMalformedMessage, "doe length below header size"};
  return h;
}

std::size_t doe_object_size(const DoeHeader& header) {
  // The true-length dword rides outside the counted region.
  return static_cast<std::size_t>(header.length_dwords) * 4 + 4;
}

Result<std::pair<std::uint8_t, Bytes>> doe_decode_any(ByteSpan object) {
  auto header = doe_parse_header(object);
  if (!header.ok()) return header.error();
  const DoeHeader h = header.value();
  if (object.size() != doe_object_size(h))
    return Error{status::kMalformedMessage, "doe object size mismatch"};
  if (h.vendor_id != kDoeVendorId)
    return Error{status::kMalformedMessage, "doe vendor id mismatch"};
  ByteReader r(object.subspan(kDoeHeaderSize));
  const std::uint32_t true_len = r.u32le();
  const std::size_t padded = object.size() - kDoeHeaderSize - 4;
  if (true_len > padded)
    return Error{status::kMalformedMessage, "doe true length exceeds payload"};
  Bytes payload = r.raw(true_len);
  if (!r.ok())
    return Error{status::kMalformedMessage, "doe payload truncated"};
  return std::pair<std::uint8_t, Bytes>{h.data_object_type,
                                        std::move(payload)};
}

Result<std::pair<Bytes, bool>> doe_decode(ByteSpan object) {
  auto decoded = doe_decode_any(object);
  if (!decoded.ok()) return decoded.error();
  auto [type, payload] = decoded.take();
  if (type != kDoeTypeSpdm && type != kDoeTypeSecuredSpdm)
    return Error{status::kMalformedMessage, "doe object type not spdm"};
  return std::pair<Bytes, bool>{std::move(payload),
                                type == kDoeTypeSecuredSpdm};
}

DoeMailbox::DoeMailbox(std::size_t capacity) : buf_(capacity, 0) {}

void DoeMailbox::reset() {
  pending_size_ = 0;
  pending_start_ = write_pos_;
}

Status DoeMailbox::write(ByteSpan chunk) {
  if (pending_size_ + chunk.size() > buf_.size())
    return fail_status(status::kOverflow, "doe mailbox overflow");
  if (pending_size_ == 0) pending_start_ = write_pos_;
  for (std::uint8_t b : chunk) {
    buf_[write_pos_] = b;
    write_pos_ = (write_pos_ + 1) % buf_.size();
  }
  pending_size_ += chunk.size();
  return ok_status();
}

Bytes DoeMailbox::peek(std::size_t offset, std::size_t n) const {
  Bytes out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(buf_[(pending_start_ + offset + i) % buf_.size()]);
  return out;
}

Result<std::size_t> DoeMailbox::expected_object_size() const {
  if (pending_size_ < kDoeHeaderSize) return std::size_t{0};
  auto header = doe_parse_header(peek(0, kDoeHeaderSize));
  if (!header.ok()) return header.error();
  const std::size_t total = doe_object_size(header.value());
  if (total > buf_.size())
    return Error{status::kOverflow, "doe object exceeds mailbox capacity"};
  return total;
}

bool DoeMailbox::has_complete_object() const {
  auto expected = expected_object_size();
  if (!expected.ok()) return false;
  return expected.value() != 0 && pending_size_ >= expected.value();
}

Result<Bytes> DoeMailbox::extract_object() {
  auto expected = expected_object_size();
  if (!expected.ok()) return expected.error();
  if (expected.value() == 0 || pending_size_ < expected.value())
    return Error{status::kUnexpectedOrder, "doe object incomplete"};
  Bytes object = peek(0, expected.value());
  pending_start_ = (pending_start_ + expected.value()) % buf_.size();
  pending_size_ -= expected.value();
  return object;
}

Status DoeTransport::send_request(ByteSpan message) {
  if (request_in_flight_)
    return fail_status(status::kUnexpectedOrder,
                       "doe response not yet consumed");
  Bytes object = doe_encode(message, secured());
  tap_filter(FrameDirection::HostToDevice, object);
  for (std::size_t off = 0; off < object.size(); off += kWriteChunk) {
    const std::size_t n = std::min(kWriteChunk, object.size() - off);
    auto st = port_.mailbox_write(ByteSpan(object).subspan(off, n));
    if (!st.ok()) return st;
  }
  request_in_flight_ = true;
  return ok_status();
}

Result<Bytes> DoeTransport::receive_response() {
  if (!request_in_flight_)
    return Error{status::kUnexpectedOrder, "doe no request in flight"};
  request_in_flight_ = false;
  auto object = port_.mailbox_read();
  if (!object.ok()) return object.error();
  Bytes frame = object.take();
  tap_filter(FrameDirection::DeviceToHost, frame);
  auto decoded = doe_decode(frame);
  if (!decoded.ok()) return decoded.error();
  auto [payload, was_secured] = decoded.take();
  if (was_secured != secured())
    return Error{status::kMalformedMessage, "doe security flag mismatch"};
  return payload;
}

}  // namespace spdmboot
