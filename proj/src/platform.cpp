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

#include "spdmboot/platform.hpp"

#include <set>
#include <sstream>

namespace spdmboot {

const Guid& platform_guid() {
  static const Guid guid =
      Guid::parse("8be4df61-93ca-11d2-aa0d-00e098032b8c").value();
  return guid;
}

Topology default_topology() {
  Topology t;
  t.devices = {
      {"nvme0", BusKind::kPcie, DeviceClass::kNvmeStorage, true, false},
      {"nic0", BusKind::kPcie, DeviceClass::kNic, false, false},
      {"gpu0", BusKind::kPcie, DeviceClass::kGpu, false, false},
      {"serial0", BusKind::kPcie, DeviceClass::kSerial, false, false},
      {"rng0", BusKind::kPcie, DeviceClass::kRng, false, false},
      {"usbstor0", BusKind::kUsb, DeviceClass::kUsbStorage, false, false},
      {"kbd0", BusKind::kUsb, DeviceClass::kUsbKeyboard, false, false},
      {"mouse0", BusKind::kUsb, DeviceClass::kUsbMouse, false, false},
  };
  return t;
}

std::string serialize_topology(const Topology& topology) {
  std::ostringstream out;
  out << "# platform topology\n";
  out << "version: 1\n";
  for (const auto& d : topology.devices) {
    out << "device: " << d.id << " " << to_string(d.bus) << " "
        << to_string(d.device_class);
    if (d.bootable) out << " bootable";
    if (d.hotplug_after_smm_lock) out << " hotplug";
    out << "\n";
  }
  return out.str();
}

Result<Topology> parse_topology(std::string_view text) {
  Topology t;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool version_seen = false;
  auto err = [&](const std::string& what) {
    return Error{status::kParseError,
                 "line " + std::to_string(line_no) + ": " + what};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "version:") {
      std::string v;
      fields >> v;
      if (v != "1") return err("unsupported topology version: " + v);
      version_seen = true;
      continue;
    }
    if (tag != "device:") return err("unknown record: " + tag);
    if (!version_seen) return err("device record before version");
    DeviceSpec spec;
    std::string bus_s, class_s;
    if (!(fields >> spec.id >> bus_s >> class_s))
      return err("device record needs id, bus, class");
    auto bus = bus_from_string(bus_s);
    if (!bus.ok()) return err(bus.error().message);
    spec.bus = bus.value();
    auto device_class = device_class_from_string(class_s);
    if (!device_class.ok()) return err(device_class.error().message);
    spec.device_class = device_class.value();
    std::string flag;
    while (fields >> flag) {
      if (flag == "bootable")
        spec.bootable = true;
      else if (flag == "hotplug")
        spec.hotplug_after_smm_lock = true;
      else
        return err("unknown device flag: " + flag);
    }
    if (!seen.insert(spec.id).second)
      return err("duplicate device id: " + spec.id);
    t.devices.push_back(std::move(spec));
  }
  if (!version_seen)
    return Error{status::kParseError, "missing version record"};
  return t;
}

void ResponderRegistry::register_responder(std::string key,
                                           SpdmResponder* responder) {
  entries_.emplace_back(std::move(key), responder);
}

SpdmResponder* ResponderRegistry::lookup(const std::string& key) const {
  for (const auto& [k, responder] : entries_)
    if (k == key) return responder;
  return nullptr;
}

std::string registry_key(const DeviceSpec& spec) {
  return (spec.bus == BusKind::kPcie ? "doe:" : "usb:") + spec.id;
}

Result<std::unique_ptr<VirtualPlatform>> VirtualPlatform::create(
    FlashImage flash, Topology topology,
    const ProvisionedIdentities& identities, std::uint64_t seed) {
  const EfiVariable* requester_chain =
      flash.variables.get(platform_guid(), var::kRequesterChain);
  if (requester_chain == nullptr || requester_chain->data.empty())
    return Error{status::kMissingInput,
                 "RequesterSpdmCertChain not provisioned"};
  if (identities.tpm.chain_blob.empty())
    return Error{status::kMissingInput, "tpm identity missing"};
  std::set<std::string> ids;
  for (const auto& spec : topology.devices) {
    if (!ids.insert(spec.id).second)
      return Error{status::kMissingInput, "duplicate device id: " + spec.id};
    if (identities.devices.find(spec.id) == identities.devices.end())
      return Error{status::kMissingInput,
                   "no identity for device: " + spec.id};
  }
  Bytes trusted = requester_chain->data;
  return std::unique_ptr<VirtualPlatform>(
      new VirtualPlatform(std::move(flash), std::move(topology), identities,
                          std::move(trusted), seed));
}

VirtualPlatform::VirtualPlatform(FlashImage flash, Topology topology,
                                 const ProvisionedIdentities& identities,
                                 Bytes trusted_requester_chain,
                                 std::uint64_t seed)
    : seed_(seed),
      flash_(std::move(flash)),
      topology_(std::move(topology)),
      rng_(seed),
      crypto_(rng_),
      tpm_("tpm", identities.tpm.chain_blob, identities.tpm.key.private_key,
           trusted_requester_chain,
           device_measurements("tpm", make_firmware_blob("tpm", "tpm")),
           crypto_, rng_) {
  ResponderConfig device_config;
  device_config.require_session_mutual_auth = true;
  for (const auto& spec : topology_.devices) {
    const EndpointIdentity& identity = identities.devices.at(spec.id);
    auto device = std::make_unique<VirtualDevice>(
        spec.id, spec.bus, spec.device_class, spec.bootable,
        identity.chain_blob, identity.key.private_key,
        trusted_requester_chain, crypto_, rng_, device_config);
    registry_.register_responder(registry_key(spec), &device->responder());
    devices_.push_back(AttachedDevice{spec, std::move(device)});
  }
  registry_.register_tpm(&tpm_);
}

VirtualDevice* VirtualPlatform::find_device(const std::string& id) {
  for (auto& attached : devices_)
    if (attached.spec.id == id) return attached.device.get();
  return nullptr;
}

}  // namespace spdmboot
