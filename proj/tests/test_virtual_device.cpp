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

#include "doctest.h"
#include "spdmboot/spdm_requester.hpp"
#include "spdmboot/transport_doe.hpp"
#include "spdmboot/transport_usb.hpp"
#include "spdmboot/virtual_device.hpp"
#include "test_helpers.hpp"

using namespace spdmboot;
using spdmboot::testing::fixture_identity;

namespace {

struct DeviceRig {
  SeededRandom rng{301};
  CryptoProvider crypto{rng};
  VirtualDevice device;

  explicit DeviceRig(BusKind bus = BusKind::kPcie)
      : device("dev0", bus,
               bus == BusKind::kPcie ? DeviceClass::kNvmeStorage : DeviceClass::kUsbStorage,
               true, fixture_identity("vd-dev").chain_blob,
               fixture_identity("vd-dev").key.private_key,
               fixture_identity("vd-req").chain_blob, crypto, rng) {}

  SpdmRequester make_requester() {
    SpdmRequester r(fixture_identity("vd-req").chain_blob,
                    fixture_identity("vd-req").key.private_key, crypto, rng);
    r.set_expected_peer_chain(fixture_identity("vd-dev").chain_blob);
    return r;
  }
};

}  // namespace

TEST_CASE("bus and class names round trip through their parsers") {
  for (BusKind bus : {BusKind::kPcie, BusKind::kUsb}) {
    auto back = bus_from_string(to_string(bus));
    REQUIRE(back.ok());
    CHECK(back.value() == bus);
  }
  for (DeviceClass dc :
       {DeviceClass::kNvmeStorage, DeviceClass::kNic, DeviceClass::kGpu, DeviceClass::kSerial,
        DeviceClass::kRng, DeviceClass::kUsbStorage, DeviceClass::kUsbKeyboard,
        DeviceClass::kUsbMouse}) {
    auto back = device_class_from_string(to_string(dc));
    REQUIRE(back.ok());
    CHECK(back.value() == dc);
  }
  CHECK_FALSE(bus_from_string("isa").ok());
  CHECK_FALSE(device_class_from_string("floppy").ok());
}

TEST_CASE("firmware blobs are deterministic and distinct per identity") {
  Bytes a1 = make_firmware_blob("dev0", "nvme-storage");
  Bytes a2 = make_firmware_blob("dev0", "nvme-storage");
  Bytes b = make_firmware_blob("dev1", "nvme-storage");
  Bytes c = make_firmware_blob("dev0", "nic");
  CHECK(a1 == a2);
  CHECK(a1 != b);
  CHECK(a1 != c);
  CHECK(a1.size() == 256);
}

TEST_CASE("device measurements carry fixed-width digests") {
  Bytes blob = make_firmware_blob("dev0", "nvme-storage");
  auto m = device_measurements("dev0", blob);
  REQUIRE(m.size() == 2);
  CHECK(m[0].index == 1);
  CHECK(m[0].type == MeasurementType::FirmwareHash);
  CHECK(m[0].value == sha256(blob));
  CHECK(m[1].index == 2);
  CHECK(m[1].type == MeasurementType::ConfigHash);
  CHECK(m[1].value.size() == kSha256Size);
}

TEST_CASE("pcie device answers discovery then speaks the protocol") {
  DeviceRig rig;
  // DOE discovery: type 0 object in, discovery response out.
  Bytes discovery = doe_encode_object(kDoeTypeDiscovery, Bytes{0x00});
  REQUIRE(rig.device.mailbox_write(discovery).ok());
  auto reply = rig.device.mailbox_read();
  REQUIRE(reply.ok());
  auto decoded = doe_decode_any(reply.value());
  REQUIRE(decoded.ok());
  CHECK(decoded.value().first == kDoeTypeDiscovery);

  DoeTransport transport(rig.device);
  SpdmRequester requester = rig.make_requester();
  REQUIRE(requester.init_connection(transport).ok());
  REQUIRE(requester.authenticate(transport).ok());
  auto blocks = requester.get_measurements(transport);
  REQUIRE(blocks.ok());
  CHECK(blocks.value() == device_measurements("dev0", rig.device.firmware_blob()));
}

TEST_CASE("usb device speaks the protocol over control transfers") {
  DeviceRig rig(BusKind::kUsb);
  UsbTransport transport(rig.device);
  SpdmRequester requester = rig.make_requester();
  REQUIRE(requester.init_connection(transport).ok());
  REQUIRE(requester.authenticate(transport).ok());
  auto session = requester.establish_session(transport, true);
  REQUIRE(session.ok());
  CHECK(rig.device.responder().mutual_auth_complete());
}

TEST_CASE("mailbox read before any request is an ordering error") {
  DeviceRig rig;
  auto r = rig.device.mailbox_read();
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().code == status::kUnexpectedOrder);
}

TEST_CASE("non-spdm mailbox objects other than discovery are dropped") {
  DeviceRig rig;
  Bytes odd = doe_encode_object(0x7e, Bytes{0x01, 0x02});
  REQUIRE(rig.device.mailbox_write(odd).ok());
  CHECK_FALSE(rig.device.mailbox_read().ok());
}

TEST_CASE("mark_initialized flips state only outside quarantine") {
  DeviceRig rig;
  CHECK_FALSE(rig.device.initialized());
  rig.device.mark_initialized();
  CHECK(rig.device.initialized());

  DeviceRig rig2;
  rig2.device.quarantine();
  rig2.device.mark_initialized();
  CHECK_FALSE(rig2.device.initialized());
}

TEST_CASE("quarantine blocks every interface") {
  DeviceRig pcie;
  REQUIRE(pcie.device.generic_io(Bytes{0x01}).ok());
  pcie.device.quarantine();
  CHECK(pcie.device.quarantined());

  CHECK_FALSE(pcie.device.generic_io(Bytes{0x01}).ok());
  Bytes object = doe_encode(Bytes{0x01}, false);
  CHECK_FALSE(pcie.device.mailbox_write(object).ok());
  CHECK_FALSE(pcie.device.mailbox_read().ok());

  DeviceRig usb(BusKind::kUsb);
  usb.device.quarantine();
  UsbSetupPacket descriptor{kUsbDirInStandard, kUsbGetDescriptor, 0x0100, 0, 18};
  CHECK_FALSE(usb.device.control_transfer(descriptor, {}).ok());
}

TEST_CASE("quarantine discards a half-assembled mailbox object") {
  DeviceRig rig;
  Bytes object = doe_encode(Bytes(40, 0x55), false);
  REQUIRE(rig.device.mailbox_write(ByteSpan(object.data(), 10)).ok());
  rig.device.quarantine();
  // Even if quarantine were lifted mid-boot the fragment must be gone; the
  // blocked write proves the state, the reset is observable via the device
  // being re-creatable only from scratch.
  CHECK_FALSE(rig.device.mailbox_write(ByteSpan(object.data() + 10, 5)).ok());
}

TEST_CASE("split mailbox writes assemble into one spdm exchange") {
  DeviceRig rig;
  SpdmMessage get_version;
  get_version.version = SpdmVersion{1, 0};
  get_version.kind = MessageKind::GetVersion;
  get_version.body = GetVersionBody{};
  Bytes object = doe_encode(encode_message(get_version), false);

  for (std::size_t i = 0; i < object.size(); ++i) {
    REQUIRE(rig.device.mailbox_write(ByteSpan(object.data() + i, 1)).ok());
  }
  auto reply = rig.device.mailbox_read();
  REQUIRE(reply.ok());
  auto decoded = doe_decode(reply.value());
  REQUIRE(decoded.ok());
  auto msg = decode_message(decoded.value().first);
  REQUIRE(msg.ok());
  CHECK(msg.value().kind == MessageKind::Version);
}
