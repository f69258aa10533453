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

// Data object framing: dword 0 packs vendor_id (15:0) and data_object_type
// (23:16); dword 1 carries the object length in dwords covering the header
// and the dword-padded payload. A u32 LE true-length field follows the
// header, outside the dword count, so decode can strip pad bytes.
inline constexpr std::uint16_t kDoeVendorId = 0x0001;
inline constexpr std::uint8_t kDoeTypeDiscovery = 0x00;
inline constexpr std::uint8_t kDoeTypeSpdm = 0x01;
inline constexpr std::uint8_t kDoeTypeSecuredSpdm = 0x02;
inline constexpr std::size_t kDoeHeaderSize = 8;

struct DoeHeader {
  std::uint16_t vendor_id = kDoeVendorId;
  std::uint8_t data_object_type = kDoeTypeSpdm;
  std::uint32_t length_dwords = 0;
};

Bytes doe_encode(ByteSpan spdm_message, bool secured);
Result<std::pair<Bytes, bool>> doe_decode(ByteSpan object);
// Raw object with an arbitrary type; payload is carried verbatim.
Bytes doe_encode_object(std::uint8_t data_object_type, ByteSpan payload);
// Type plus unpadded payload, with no restriction on the object type.
Result<std::pair<std::uint8_t, Bytes>> doe_decode_any(ByteSpan object);
Result<DoeHeader> doe_parse_header(ByteSpan bytes);
// Whole-frame byte count implied by a header.
std::size_t doe_object_size(const DoeHeader& header);

// Fixed-capacity circular byte buffer modelling the mailbox shared by host
// writes and the device's object assembly.
class DoeMailbox {
 public:
  explicit DoeMailbox(std::size_t capacity = 4096);

  Status write(ByteSpan chunk);
  // Drops all pending bytes; backing storage is not scrubbed.
  void reset();
  // Frame size implied by the pending header: 0 while fewer than a header's
  // worth of bytes is pending, an error for headers that cannot fit.
  Result<std::size_t> expected_object_size() const;
  bool has_complete_object() const;
  Result<Bytes> extract_object();

  std::size_t capacity() const { return buf_.size(); }
  std::size_t pending_bytes() const { return pending_size_; }
  // Offset of the oldest unconsumed object's header within the buffer.
  std::size_t first_header_offset() const { return pending_start_; }
  std::size_t write_index() const { return write_pos_; }

 private:
  Bytes peek(std::size_t offset, std::size_t n) const;

  Bytes buf_;
  std::size_t write_pos_ = 0;
  std::size_t pending_start_ = 0;
  std::size_t pending_size_ = 0;
};

// Device side of the mailbox; virtual PCIe devices implement this.
class DoeMailboxPort {
 public:
  virtual ~DoeMailboxPort() = default;
  virtual Status mailbox_write(ByteSpan chunk) = 0;
  virtual Result<Bytes> mailbox_read() = 0;
};

class DoeTransport final : public TransportBinding {
 public:
  explicit DoeTransport(DoeMailboxPort& port) : port_(port) {}

  Status send_request(ByteSpan message) override;
  Result<Bytes> receive_response() override;
  std::string_view name() const override { return "pci-doe"; }

 private:
  DoeMailboxPort& port_;
  bool request_in_flight_ = false;
};

}  // namespace spdmboot
