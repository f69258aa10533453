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

#include "spdmboot/virtual_device.hpp"

namespace spdmboot {

std::string_view to_string(BusKind bus) {
  switch (bus) {
    case BusKind::kPcie: return "pcie";
    case BusKind::kUsb: return "usb";
  }
  return "?";
}

std::string_view to_string(DeviceClass device_class) {
  switch (device_class) {
    case DeviceClass::kNvmeStorage: return "nvme-storage";
    case DeviceClass::kNic: return "nic";
    case DeviceClass::kGpu: return "gpu";
    case DeviceClass::kSerial: return "serial";
    case DeviceClass::kRng: return "rng";
    case DeviceClass::kUsbStorage: return "usb-storage";
    case DeviceClass::kUsbKeyboard: return "usb-keyboard";
    case DeviceClass::kUsbMouse: return "usb-mouse";
  }
  return "?";
}

Result<BusKind> bus_from_string(std::string_view s) {
  if (s == "pcie") return BusKind::kPcie;
  if (s == "usb") return BusKind::kUsb;
  return Error{status::kParseError, "unknown bus: " + std::string(s)};
}

Result<DeviceClass> device_class_from_string(std::string_view s) {
  for (auto c : {DeviceClass::kNvmeStorage, DeviceClass::kNic,
                 DeviceClass::kGpu, DeviceClass::kSerial, DeviceClass::kRng,
                 DeviceClass::kUsbStorage, DeviceClass::kUsbKeyboard,
                 DeviceClass::kUsbMouse}) {
    if (to_string(c) == s) return c;
  }
  return Error{status::kParseError, "unknown device class: " + std::string(s)};
}

Bytes make_firmware_blob(std::string_view id, std::string_view class_name) {
  // 256 bytes of hash-chained fixture data, unique per (id, class).
  Bytes block = sha256(to_bytes(std::string(id) + ":" +
                                std::string(class_name)));
  Bytes blob;
  for (int i = 0; i < 8; ++i) {
    blob.insert(blob.end(), block.begin(), block.end());
    block = sha256(block);
  }
  return blob;
}

std::vector<MeasurementBlock> device_measurements(std::string_view id,
                                                  const Bytes& firmware_blob) {
  std::vector<MeasurementBlock> m;
  m.push_back({1, MeasurementType::FirmwareHash, sha256(firmware_blob)});
  m.push_back({2, MeasurementType::ConfigHash,
               sha256(to_bytes("fw-1.0:" + std::string(id)))});
  return m;
}

VirtualDevice::VirtualDevice(std::string id, BusKind bus,
                             DeviceClass device_class, bool bootable,
                             Bytes cert_chain_blob, Bytes private_key,
                             Bytes trusted_requester_chain_blob,
                             CryptoProvider& crypto, RandomSource& rng,
                             ResponderConfig config)
    : id_(id),
      bus_(bus),
      device_class_(device_class),
      bootable_(bootable),
      firmware_blob_(make_firmware_blob(id, device_class)),
      responder_(id, std::move(cert_chain_blob), std::move(private_key),
                 std::move(trusted_requester_chain_blob),
                 device_measurements(id, firmware_blob_), crypto, rng,
                 std::move(config)),
      usb_fn_([this](ByteSpan message, bool) -> Result<Bytes> {
        return responder_.dispatch(message);
      }) {}

void VirtualDevice::mark_initialized() {
  if (!quarantined_) initialized_ = true;
}

void VirtualDevice::quarantine() {
  quarantined_ = true;
  initialized_ = false;
  usb_fn_.discard_buffers();
  mailbox_.reset();
  doe_read_queue_.clear();
}

Result<Bytes> VirtualDevice::generic_io(ByteSpan) {
  if (quarantined_)
    return Error{status::kTransportFailure, "device quarantined"};
  return Bytes{0x01};
}

Status VirtualDevice::process_mailbox_objects() {
  while (true) {
    auto expected = mailbox_.expected_object_size();
    if (!expected.ok()) return Status(expected.error());
    if (expected.value() == 0 ||
        mailbox_.pending_bytes() < expected.value())
      return ok_status();
    auto object = mailbox_.extract_object();
    if (!object.ok()) return Status(object.error());
    auto decoded = doe_decode_any(object.value());
    if (!decoded.ok()) return Status(decoded.error());
    const auto& [type, payload] = decoded.value();
    if (type == kDoeTypeSpdm || type == kDoeTypeSecuredSpdm) {
      const Bytes response = responder_.dispatch(payload);
      doe_read_queue_.push_back(
          doe_encode(response, type == kDoeTypeSecuredSpdm));
    } else if (type == kDoeTypeDiscovery) {
      // Acknowledged without touching the responder.
      ByteWriter w;
      w.u16le(kDoeVendorId);
      w.u8(kDoeTypeSpdm);
      w.u8(0);
      doe_read_queue_.push_back(doe_encode_object(kDoeTypeDiscovery,
                                                  w.data()));
    }
    // Other object types are accepted and dropped.
  }
}

Status VirtualDevice::mailbox_write(ByteSpan chunk) {
  if (quarantined_)
    return fail_status(status::kTransportFailure, "device quarantined");
  auto st = mailbox_.write(chunk);
  if (!st.ok()) return st;
  return process_mailbox_objects();
}

Result<Bytes> VirtualDevice::mailbox_read() {
  if (quarantined_)
    return Error{status::kTransportFailure, "device quarantined"};
  if (doe_read_queue_.empty())
    return Error{status::kUnexpectedOrder, "doe read buffer empty"};
  Bytes object = std::move(doe_read_queue_.front());
  doe_read_queue_.pop_front();
  return object;
}

Result<Bytes> VirtualDevice::control_transfer(const UsbSetupPacket& setup,
                                              ByteSpan data) {
  if (quarantined_)
    return Error{status::kTransportFailure, "usb stall: device quarantined"};
  return usb_fn_.control_transfer(setup, data);
}

}  // namespace spdmboot
