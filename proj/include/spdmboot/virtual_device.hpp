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

#include <deque>
#include <string>
#include <vector>

#include "spdmboot/spdm_responder.hpp"
#include "spdmboot/transport_doe.hpp"
#include "spdmboot/transport_usb.hpp"

namespace spdmboot {

enum class BusKind : std::uint8_t { kPcie, kUsb };

enum class DeviceClass : std::uint8_t {
  kNvmeStorage,
  kNic,
  kGpu,
  kSerial,
  kRng,
  kUsbStorage,
  kUsbKeyboard,
  kUsbMouse,
};

std::string_view to_string(BusKind bus);
std::string_view to_string(DeviceClass device_class);
Result<BusKind> bus_from_string(std::string_view s);
Result<DeviceClass> device_class_from_string(std::string_view s);

// Fixture firmware image: deterministic bytes derived from the device id and
// class, long enough to exercise chunked transports.
Bytes make_firmware_blob(std::string_view id, std::string_view class_name);
inline Bytes make_firmware_blob(std::string_view id, DeviceClass device_class) {
  return make_firmware_blob(id, to_string(device_class));
}
// Ground truth served by GET_MEASUREMENTS: a digest of the firmware blob and
// a digest of the version manifest.
std::vector<MeasurementBlock> device_measurements(std::string_view id,
                                                  const Bytes& firmware_blob);

// One attached peripheral: an SPDM responder reachable through the bus
// binding matching `bus`, plus the flags the boot flow drives.
class VirtualDevice final : public DoeMailboxPort, public UsbControlEndpoint {
 public:
  VirtualDevice(std::string id, BusKind bus, DeviceClass device_class,
                bool bootable, Bytes cert_chain_blob, Bytes private_key,
                Bytes trusted_requester_chain_blob, CryptoProvider& crypto,
                RandomSource& rng, ResponderConfig config = {});

  const std::string& id() const { return id_; }
  BusKind bus() const { return bus_; }
  DeviceClass device_class() const { return device_class_; }
  bool bootable() const { return bootable_; }
  bool initialized() const { return initialized_; }
  bool quarantined() const { return quarantined_; }
  const Bytes& firmware_blob() const { return firmware_blob_; }

  void mark_initialized();
  // Drops buffered transport state and blocks further I/O.
  void quarantine();

  SpdmResponder& responder() { return responder_; }
  const SpdmResponder& responder() const { return responder_; }

  // Class I/O stand-in (block read, report poll). Quarantined devices
  // refuse it.
  Result<Bytes> generic_io(ByteSpan request);

  Status mailbox_write(ByteSpan chunk) override;
  Result<Bytes> mailbox_read() override;

  Result<Bytes> control_transfer(const UsbSetupPacket& setup,
                                 ByteSpan data) override;

 private:
  Status process_mailbox_objects();

  std::string id_;
  BusKind bus_;
  DeviceClass device_class_;
  bool bootable_;
  Bytes firmware_blob_;
  SpdmResponder responder_;
  UsbSpdmFunction usb_fn_;
  DoeMailbox mailbox_;
  std::deque<Bytes> doe_read_queue_;
  bool initialized_ = false;
  bool quarantined_ = false;
};

}  // namespace spdmboot
