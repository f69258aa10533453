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
#include "spdmboot/platform.hpp"
#include "spdmboot/scenario.hpp"
#include "test_helpers.hpp"

using namespace spdmboot;

TEST_CASE("default topology shape") {
  Topology t = default_topology();
  REQUIRE(t.devices.size() == 8);
  std::size_t pcie = 0, usb = 0, bootable = 0;
  for (const auto& d : t.devices) {
    if (d.bus == BusKind::kPcie) ++pcie;
    if (d.bus == BusKind::kUsb) ++usb;
    if (d.bootable) ++bootable;
    CHECK_FALSE(d.hotplug_after_smm_lock);
  }
  CHECK(pcie == 5);
  CHECK(usb == 3);
  CHECK(bootable == 1);
  CHECK(t.devices[0].id == "nvme0");
  CHECK(t.devices[0].bootable);
}

TEST_CASE("topology text round trips") {
  Topology t = default_topology();
  t.devices.push_back({"hotusb0", BusKind::kUsb, DeviceClass::kUsbStorage, false, true});
  std::string text = serialize_topology(t);
  auto back = parse_topology(text);
  REQUIRE(back.ok());
  CHECK(back.value() == t);
}

TEST_CASE("topology parser rejects malformed input with line numbers") {
  CHECK_FALSE(parse_topology("device: a pcie nvme-storage\n").ok());  // version first
  CHECK_FALSE(parse_topology("version: 2\n").ok());
  auto dup = parse_topology(
      "version: 1\ndevice: a pcie nvme-storage\ndevice: a pcie nic\n");
  REQUIRE_FALSE(dup.ok());
  CHECK(dup.error().message.find("line 3") != std::string::npos);
  CHECK_FALSE(parse_topology("version: 1\ndevice: a warp nvme-storage\n").ok());
  CHECK_FALSE(parse_topology("version: 1\ndevice: a pcie floppy\n").ok());
  CHECK_FALSE(parse_topology("version: 1\ndevice: a pcie nvme-storage wings\n").ok());
  CHECK(parse_topology("version: 1\n# comment\n\n").ok());
}

TEST_CASE("registry keys are transport scoped") {
  CHECK(registry_key({"nvme0", BusKind::kPcie, DeviceClass::kNvmeStorage, true, false}) ==
        "doe:nvme0");
  CHECK(registry_key({"kbd0", BusKind::kUsb, DeviceClass::kUsbKeyboard, false, false}) ==
        "usb:kbd0");
}

TEST_CASE("provisioned platform wires every responder into the registry") {
  auto sys = provision_system(777, default_topology());
  REQUIRE(sys.ok());
  VirtualPlatform& plat = *sys.value().platform;

  CHECK(plat.seed() == 777);
  CHECK(plat.devices().size() == 8);
  CHECK(plat.registry().tpm() == &plat.tpm());
  CHECK(plat.registry().entries().size() == 8);
  for (const auto& attached : plat.devices()) {
    SpdmResponder* r = plat.registry().lookup(registry_key(attached.spec));
    REQUIRE(r != nullptr);
    CHECK(r == &attached.device->responder());
  }
  CHECK(plat.registry().lookup("doe:absent") == nullptr);
  CHECK(plat.find_device("nvme0") != nullptr);
  CHECK(plat.find_device("absent") == nullptr);

  // Devices present the chains that were written into the variable store.
  for (const auto& attached : plat.devices()) {
    const EfiVariable* v = plat.variables().get(
        platform_guid(), var::responder_chain_name(attached.spec.id));
    REQUIRE(v != nullptr);
    CHECK(v->data == attached.device->responder().cert_chain_blob());
  }
  CHECK(plat.variables().write_protected());
}

TEST_CASE("platform creation demands a provisioned requester identity") {
  auto sys = provision_system(778, default_topology());
  REQUIRE(sys.ok());

  FlashImage flash = sys.value().platform->flash();
  auto gutted = tamper_variable(flash.variables, platform_guid(), var::kRequesterChain,
                                [](Bytes& d) { d.clear(); });
  REQUIRE(gutted.ok());
  flash.variables = gutted.take();

  auto plat = VirtualPlatform::create(std::move(flash), default_topology(),
                                      sys.value().identities, 778);
  REQUIRE_FALSE(plat.ok());
  CHECK(plat.error().code == status::kMissingInput);
}

TEST_CASE("platform creation rejects duplicate device ids") {
  Topology bad = default_topology();
  bad.devices.push_back(bad.devices[0]);
  auto sys = provision_system(779, bad);
  CHECK_FALSE(sys.ok());
}
