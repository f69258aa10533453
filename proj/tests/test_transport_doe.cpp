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

#include <deque>

#include "doctest.h"
#include "spdmboot/rng.hpp"
#include "spdmboot/transport_doe.hpp"

using namespace spdmboot;

TEST_CASE("doe object layout is frozen") {
  Bytes payload{0x01, 0x02, 0x03, 0x04, 0x05};
  Bytes object = doe_encode(payload, false);
  // Header 8, payload padded to 8, true-length word 4.
  REQUIRE(object.size() == 20);
  // dword 0: vendor id in bits 15:0, object type in 23:16.
  CHECK(object[0] == 0x01);
  CHECK(object[1] == 0x00);
  CHECK(object[2] == kDoeTypeSpdm);
  CHECK(object[3] == 0x00);
  // dword 1: length in dwords covering header + padded payload.
  CHECK(object[4] == 0x04);
  CHECK(object[5] == 0x00);
  CHECK(object[6] == 0x00);
  CHECK(object[7] == 0x00);
  // True length (u32 LE) follows the header.
  CHECK(object[8] == 0x05);
  CHECK(object[9] == 0x00);
  CHECK(Bytes(object.begin() + 12, object.begin() + 17) == payload);

  Bytes secured = doe_encode(payload, true);
  CHECK(secured[2] == kDoeTypeSecuredSpdm);
}

TEST_CASE("doe encode and decode round trip across payload sizes") {
  SeededRandom rng(91);
  for (std::size_t n = 1; n <= 4096; ++n) {
    Bytes payload = rng.bytes(n);
    bool secured = (n % 3) == 0;
    Bytes object = doe_encode(payload, secured);
    CHECK(object.size() % 4 == 0);
    auto back = doe_decode(object);
    REQUIRE(back.ok());
    CHECK(back.value().first == payload);
    CHECK(back.value().second == secured);
  }
}

TEST_CASE("doe header length arithmetic") {
  Bytes object = doe_encode(Bytes(5, 0xaa), false);
  auto header = doe_parse_header(object);
  REQUIRE(header.ok());
  CHECK(header.value().vendor_id == kDoeVendorId);
  CHECK(header.value().data_object_type == kDoeTypeSpdm);
  CHECK(header.value().length_dwords == 4);
  CHECK(doe_object_size(header.value()) == 20);
}

TEST_CASE("doe decode rejects inconsistent lengths") {
  Bytes object = doe_encode(Bytes(5, 0xbb), false);

  Bytes bad_count = object;
  bad_count[4] = 0x05;  // claims one more dword than present
  CHECK_FALSE(doe_decode(bad_count).ok());

  Bytes bad_true_len = object;
  bad_true_len[8] = 0x09;  // true length exceeds the padded payload
  CHECK_FALSE(doe_decode(bad_true_len).ok());

  Bytes truncated(object.begin(), object.end() - 4);
  CHECK_FALSE(doe_decode(truncated).ok());

  Bytes under_header{0x01, 0x00, 0x01};
  CHECK_FALSE(doe_decode(under_header).ok());
}

TEST_CASE("doe decode rejects foreign vendor ids and reserved bits") {
  Bytes object = doe_encode(Bytes(5, 0xcc), false);

  Bytes wrong_vendor = object;
  wrong_vendor[0] = 0x99;
  CHECK_FALSE(doe_decode(wrong_vendor).ok());

  Bytes reserved_set = object;
  reserved_set[3] = 0x01;
  CHECK_FALSE(doe_decode(reserved_set).ok());

  Bytes wrong_type = object;
  wrong_type[2] = kDoeTypeDiscovery;
  CHECK_FALSE(doe_decode(wrong_type).ok());
}

TEST_CASE("doe_decode_any carries arbitrary object types verbatim") {
  Bytes payload{0xde, 0xad};
  Bytes object = doe_encode_object(kDoeTypeDiscovery, payload);
  auto back = doe_decode_any(object);
  REQUIRE(back.ok());
  CHECK(back.value().first == kDoeTypeDiscovery);
  CHECK(back.value().second == payload);
}

TEST_CASE("mailbox assembles an object from arbitrary write chunking") {
  SeededRandom rng(92);
  for (int trial = 0; trial < 50; ++trial) {
    Bytes payload = rng.bytes(1 + rng.next_u64() % 600);
    Bytes object = doe_encode(payload, false);

    DoeMailbox box;
    std::size_t off = 0;
    while (off < object.size()) {
      std::size_t n = 1 + rng.next_u64() % 64;
      n = std::min(n, object.size() - off);
      REQUIRE(box.write(ByteSpan(object.data() + off, n)).ok());
      off += n;
    }
    REQUIRE(box.has_complete_object());
    auto out = box.extract_object();
    REQUIRE(out.ok());
    CHECK(out.value() == object);
    CHECK(box.pending_bytes() == 0);
  }
}

TEST_CASE("mailbox wraps around its circular buffer without corruption") {
  DoeMailbox box(256);
  SeededRandom rng(93);
  // Push enough traffic through a small box that the write index wraps
  // several times; every object must come back intact.
  for (int i = 0; i < 40; ++i) {
    Bytes payload = rng.bytes(1 + rng.next_u64() % 180);
    Bytes object = doe_encode(payload, false);
    REQUIRE(box.write(object).ok());
    REQUIRE(box.has_complete_object());
    auto out = box.extract_object();
    REQUIRE(out.ok());
    CHECK(out.value() == object);
  }
  CHECK(box.write_index() < box.capacity());
}

TEST_CASE("mailbox reports expected size and rejects oversized objects") {
  DoeMailbox box(64);
  CHECK(box.expected_object_size().value() == 0);  // nothing pending

  Bytes object = doe_encode(Bytes(100, 0x11), false);  // larger than capacity
  ByteSpan head(object.data(), kDoeHeaderSize);
  REQUIRE(box.write(head).ok());
  CHECK_FALSE(box.expected_object_size().ok());

  DoeMailbox big(4096);
  REQUIRE(big.write(head).ok());
  auto want = big.expected_object_size();
  REQUIRE(want.ok());
  CHECK(want.value() == object.size());
  CHECK_FALSE(big.has_complete_object());
}

TEST_CASE("mailbox write fails when the buffer is full") {
  DoeMailbox box(32);
  Bytes object = doe_encode(Bytes(10, 0x22), false);
  REQUIRE(box.write(object).ok());
  auto st = box.write(object);
  CHECK_FALSE(st.ok());
  box.reset();
  CHECK(box.pending_bytes() == 0);
  CHECK(box.write(object).ok());
}

namespace {

// Mailbox port that frames echo responses back, like a device whose
// responder echoes payloads.
struct EchoMailboxPort final : DoeMailboxPort {
  // Large enough for a framed 4096-byte payload plus padding.
  DoeMailbox box{8192};
  std::deque<Bytes> responses;

  Status mailbox_write(ByteSpan chunk) override {
    if (auto s = box.write(chunk); !s.ok()) return s;
    while (box.has_complete_object()) {
      auto object = box.extract_object();
      if (!object.ok()) return object.error();
      auto decoded = doe_decode(object.value());
      if (!decoded.ok()) return decoded.error();
      responses.push_back(doe_encode(decoded.value().first, decoded.value().second));
    }
    return ok_status();
  }

  Result<Bytes> mailbox_read() override {
    if (responses.empty()) {
      return Result<Bytes>::failure(status::kUnexpectedOrder, "read on empty mailbox");
    }
    Bytes r = std::move(responses.front());
    responses.pop_front();
    return r;
  }
};

}  // namespace

TEST_CASE("doe transport round trips messages through a mailbox port") {
  EchoMailboxPort port;
  DoeTransport transport(port);
  SeededRandom rng(94);
  for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{63}, std::size_t{64},
                        std::size_t{65}, std::size_t{4096}}) {
    Bytes msg = rng.bytes(n);
    REQUIRE(transport.send_request(msg).ok());
    auto rsp = transport.receive_response();
    REQUIRE(rsp.ok());
    CHECK(rsp.value() == msg);
  }
}

TEST_CASE("doe transport enforces request before response") {
  EchoMailboxPort port;
  DoeTransport transport(port);
  CHECK_FALSE(transport.receive_response().ok());
}

TEST_CASE("doe transport records whole objects on the tap") {
  EchoMailboxPort port;
  DoeTransport transport(port);
  TransportTap tap;
  transport.set_tap(&tap);
  REQUIRE(transport.send_request(Bytes(5, 0x33)).ok());
  REQUIRE(transport.receive_response().ok());
  REQUIRE(tap.records().size() == 2);
  CHECK(tap.records()[0].binding == "pci-doe");
  CHECK(tap.records()[0].length == 20);
  CHECK(tap.records()[1].length == 20);
}

TEST_CASE("doe transport rejects a secured-flag mismatch") {
  struct FlipPort final : DoeMailboxPort {
    EchoMailboxPort inner;
    Status mailbox_write(ByteSpan chunk) override { return inner.mailbox_write(chunk); }
    Result<Bytes> mailbox_read() override {
      auto r = inner.mailbox_read();
      if (!r.ok()) return r;
      auto decoded = doe_decode(r.value());
      REQUIRE(decoded.ok());
      return doe_encode(decoded.value().first, !decoded.value().second);
    }
  } port;
  DoeTransport transport(port);
  REQUIRE(transport.send_request(Bytes{0x01}).ok());
  CHECK_FALSE(transport.receive_response().ok());
}
