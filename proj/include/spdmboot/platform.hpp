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

#include <memory>
#include <string>
#include <vector>

#include "spdmboot/efi_store.hpp"
#include "spdmboot/identity.hpp"
#include "spdmboot/virtual_device.hpp"
#include "spdmboot/virtual_tpm.hpp"

namespace spdmboot {

// All boot variables live under the EFI global-variable GUID.
const Guid& platform_guid();

struct DeviceSpec {
  std::string id;
  BusKind bus = BusKind::kPcie;
  DeviceClass device_class = DeviceClass::kNvmeStorage;
  bool bootable = false;
  // Device attaches only after the SMM lock; the boot flow must reject it.
  bool hotplug_after_smm_lock = false;
  bool operator==(const DeviceSpec&) const = default;
};

struct Topology {
  std::vector<DeviceSpec> devices;
  bool operator==(const Topology&) const = default;
};

// Five PCIe devices (nvme, nic, gpu, serial, rng) and three USB devices
// (storage, keyboard, mouse); the nvme disk is the boot device.
Topology default_topology();

std::string serialize_topology(const Topology& topology);
Result<Topology> parse_topology(std::string_view text);

// Key material minted at provisioning time: the firmware's SPDM identity
// plus one identity per responder endpoint.
struct ProvisionedIdentities {
  EndpointIdentity requester;
  EndpointIdentity tpm;
  std::map<std::string, EndpointIdentity> devices;
};

// Ordered responder list keyed by transport-scoped identity; the TPM is held
// as a direct reference so no search is needed to reach it.
class ResponderRegistry {
 public:
  void register_responder(std::string key, SpdmResponder* responder);
  void register_tpm(VirtualTpm* tpm) { tpm_ = tpm; }

  SpdmResponder* lookup(const std::string& key) const;
  VirtualTpm* tpm() const { return tpm_; }
  const std::vector<std::pair<std::string, SpdmResponder*>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, SpdmResponder*>> entries_;
  VirtualTpm* tpm_ = nullptr;
};

std::string registry_key(const DeviceSpec& spec);

// The assembled machine: flash (code + variables), TPM, attached devices,
// and the responder registry. Responders capture the requester chain stored
// in flash at assembly time as their trusted copy; edits to the variable
// after this point are what the trust checks exist to catch.
class VirtualPlatform {
 public:
  struct AttachedDevice {
    DeviceSpec spec;
    std::unique_ptr<VirtualDevice> device;
  };

  static Result<std::unique_ptr<VirtualPlatform>> create(
      FlashImage flash, Topology topology,
      const ProvisionedIdentities& identities, std::uint64_t seed);

  FlashImage& flash() { return flash_; }
  VariableStore& variables() { return flash_.variables; }
  const VariableStore& variables() const { return flash_.variables; }
  VirtualTpm& tpm() { return tpm_; }
  std::vector<AttachedDevice>& devices() { return devices_; }
  const std::vector<AttachedDevice>& devices() const { return devices_; }
  VirtualDevice* find_device(const std::string& id);
  ResponderRegistry& registry() { return registry_; }
  CryptoProvider& crypto() { return crypto_; }
  RandomSource& rng() { return rng_; }
  std::uint64_t seed() const { return seed_; }

 private:
  VirtualPlatform(FlashImage flash, Topology topology,
                  const ProvisionedIdentities& identities,
                  Bytes trusted_requester_chain, std::uint64_t seed);

  std::uint64_t seed_;
  FlashImage flash_;
  Topology topology_;
  SeededRandom rng_;
  CryptoProvider crypto_;
  VirtualTpm tpm_;
  std::vector<AttachedDevice> devices_;
  ResponderRegistry registry_;
};

}  // namespace spdmboot
