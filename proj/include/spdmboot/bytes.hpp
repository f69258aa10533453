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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spdmboot {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view s);
Bytes concat(std::initializer_list<ByteSpan> parts);
std::string to_hex(ByteSpan data);
// Short prefix form used by frame logs ("a1b2c3.." capped at n bytes).
std::string hex_head(ByteSpan data, std::size_t n = 8);

std::string base64_encode(ByteSpan data);
// Returns false on any character outside the base64 alphabet or bad padding.
bool base64_decode(std::string_view text, Bytes& out);

// Little/big-endian byte packing. Writers never fail; readers latch a
// truncation flag instead of throwing so codecs can check once at the end.
class ByteWriter {
 public:
  void u8(std::uint8_t v);
  void u16le(std::uint16_t v);
  void u32le(std::uint32_t v);
  void u64le(std::uint64_t v);
  void u16be(std::uint16_t v);
  void u32be(std::uint32_t v);
  void raw(ByteSpan data);
  // Length-prefixed blobs used throughout the certificate and message codecs.
  void blob8(ByteSpan data);
  void blob16(ByteSpan data);

  const Bytes& data() const { return buf_; }
  Bytes take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16le();
  std::uint32_t u32le();
  std::uint64_t u64le();
  std::uint16_t u16be();
  std::uint32_t u32be();
  Bytes raw(std::size_t n);
  Bytes blob8();
  Bytes blob16();

  bool ok() const { return ok_; }
  // True only when every byte was consumed and no read ran short.
  bool done() const { return ok_ && pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  void skip(std::size_t n);

 private:
  bool take(std::size_t n, const std::uint8_t** out);

  ByteSpan data_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

}  // namespace spdmboot
