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

#include "spdmboot/transport_usb.hpp"

#include <algorithm>

namespace spdmboot {

Bytes usb_encode_setup(const UsbSetupPacket& setup) {
  ByteWriter w;
  w.u8(setup.bmRequestType);
  w.u8(setup.bRequest);
  w.u16le(setup.wValue);
  w.u16le(setup.wIndex);
  w.u16le(setup.wLength);
  return w.take();
}

Result<UsbSetupPacket> usb_decode_setup(ByteSpan bytes) {
  ByteReader r(bytes);
  UsbSetupPacket s;
  s.bmRequestType = r.u8();
  s.bRequest = r.u8();
  s.wValue = r.u16le();
  s.wIndex = r.u16le();
  s.wLength = r.u16le();
  if (!r.done())
    return Error{status::kMalformedMessage, "usb setup packet size"};
  return s;
}

UsbSpdmFunction::UsbSpdmFunction(Handler handler, std::size_t max_packet,
                                 std::uint16_t id_vendor,
                                 std::uint16_t id_product)
    : handler_(std::move(handler)),
      max_packet_(max_packet),
      id_vendor_(id_vendor),
      id_product_(id_product) {}

Bytes UsbSpdmFunction::device_descriptor() const {
  ByteWriter w;
  w.u8(0x12);  // bLength
  w.u8(0x01);  // bDescriptorType: device
  w.u16le(0x0200);
  w.u8(0x00);
  w.u8(0x00);
  w.u8(0x00);
  w.u8(static_cast<std::uint8_t>(max_packet_ < 255 ? max_packet_ : 255));
  w.u16le(id_vendor_);
  w.u16le(id_product_);
  w.u16le(0x0100);
  w.u8(0);
  w.u8(0);
  w.u8(0);
  w.u8(1);  // bNumConfigurations
  return w.take();
}

void UsbSpdmFunction::discard_buffers() {
  rx_.clear();
  pending_tx_.clear();
}

Status UsbSpdmFunction::dispatch() {
  if (rx_.empty())
    return fail_status(status::kMalformedMessage, "usb empty transfer");
  const std::uint8_t prefix = rx_[0];
  if (prefix != kUsbPrefixSpdm && prefix != kUsbPrefixSecuredSpdm) {
    rx_.clear();
    return fail_status(status::kMalformedMessage, "usb message type prefix");
  }
  const bool secured = prefix == kUsbPrefixSecuredSpdm;
  Bytes message(rx_.begin() + 1, rx_.end());
  rx_.clear();
  auto response = handler_(message, secured);
  if (!response.ok()) return Status(response.error());
  ByteWriter w;
  w.u8(prefix);
  w.raw(response.value());
  pending_tx_ = w.take();
  return ok_status();
}

Result<Bytes> UsbSpdmFunction::handle_out(const UsbSetupPacket& setup,
                                          ByteSpan data) {
  if (data.size() != setup.wLength)
    return Error{status::kTransportFailure, "usb stall: wLength mismatch"};
  if (setup.wIndex != rx_.size())
    return Error{status::kTransportFailure, "usb stall: write offset"};
  if (setup.wLength > max_packet_)
    return Error{status::kTransportFailure, "usb stall: packet too large"};
  rx_.insert(rx_.end(), data.begin(), data.end());
  if (data.size() < max_packet_) {
    auto st = dispatch();
    if (!st.ok()) return st.error();
  }
  return Bytes{};
}

Result<Bytes> UsbSpdmFunction::handle_in(const UsbSetupPacket& setup) {
  if (pending_tx_.empty())
    return Error{status::kTransportFailure, "usb stall: nothing pending"};
  if (setup.wValue == kUsbValueSize) {
    if (setup.wLength != 2 || setup.wIndex != 0)
      return Error{status::kTransportFailure, "usb stall: size read shape"};
    ByteWriter w;
    w.u16le(static_cast<std::uint16_t>(pending_tx_.size()));
    return w.take();
  }
  if (setup.wValue != kUsbValueData)
    return Error{status::kTransportFailure, "usb stall: unknown selector"};
  const std::size_t offset = setup.wIndex;
  if (offset >= pending_tx_.size())
    return Error{status::kTransportFailure, "usb stall: read out of range"};
  const std::size_t n =
      std::min<std::size_t>(setup.wLength, pending_tx_.size() - offset);
  Bytes chunk(pending_tx_.begin() + static_cast<std::ptrdiff_t>(offset),
              pending_tx_.begin() + static_cast<std::ptrdiff_t>(offset + n));
  if (offset + n == pending_tx_.size()) pending_tx_.clear();
  return chunk;
}

Result<Bytes> UsbSpdmFunction::control_transfer(const UsbSetupPacket& setup,
                                                ByteSpan data) {
  if (setup.bmRequestType == kUsbDirInStandard &&
      setup.bRequest == kUsbGetDescriptor) {
    Bytes d = device_descriptor();
    if (d.size() > setup.wLength) d.resize(setup.wLength);
    return d;
  }
  if (setup.bRequest != kUsbSpdmRequest)
    return Error{status::kTransportFailure, "usb stall: unsupported request"};
  if (setup.bmRequestType == kUsbDirOut) return handle_out(setup, data);
  if (setup.bmRequestType == kUsbDirIn) return handle_in(setup);
  return Error{status::kTransportFailure, "usb stall: request type"};
}

Status UsbTransport::send_request(ByteSpan message) {
  if (request_in_flight_)
    return fail_status(status::kUnexpectedOrder,
                       "usb response not yet consumed");
  ByteWriter w;
  w.u8(secured() ? kUsbPrefixSecuredSpdm : kUsbPrefixSpdm);
  w.raw(message);
  const Bytes prefixed = w.take();
  std::size_t offset = 0;
  bool sent_short = false;
  while (offset < prefixed.size()) {
    const std::size_t n = std::min(max_packet_, prefixed.size() - offset);
    Bytes chunk(prefixed.begin() + static_cast<std::ptrdiff_t>(offset),
                prefixed.begin() + static_cast<std::ptrdiff_t>(offset + n));
    tap_filter(FrameDirection::HostToDevice, chunk);
    UsbSetupPacket setup{kUsbDirOut, kUsbSpdmRequest, 0,
                         static_cast<std::uint16_t>(offset),
                         static_cast<std::uint16_t>(chunk.size())};
    auto st = endpoint_.control_transfer(setup, chunk);
    if (!st.ok()) return Status(st.error());
    sent_short = chunk.size() < max_packet_;
    offset += n;
  }
  if (!sent_short) {
    // Exact multiple of the packet size: terminate with a zero-length packet.
    Bytes zlp;
    tap_filter(FrameDirection::HostToDevice, zlp);
    UsbSetupPacket setup{kUsbDirOut, kUsbSpdmRequest, 0,
                         static_cast<std::uint16_t>(offset), 0};
    auto st = endpoint_.control_transfer(setup, zlp);
    if (!st.ok()) return Status(st.error());
  }
  request_in_flight_ = true;
  return ok_status();
}

Result<Bytes> UsbTransport::receive_response() {
  if (!request_in_flight_)
    return Error{status::kUnexpectedOrder, "usb no request in flight"};
  request_in_flight_ = false;
  UsbSetupPacket size_setup{kUsbDirIn, kUsbSpdmRequest, kUsbValueSize, 0, 2};
  auto size_read = endpoint_.control_transfer(size_setup, {});
  if (!size_read.ok()) return size_read.error();
  Bytes size_bytes = size_read.take();
  tap_filter(FrameDirection::DeviceToHost, size_bytes);
  ByteReader sr(size_bytes);
  const std::uint16_t total = sr.u16le();
  if (!sr.done())
    return Error{status::kMalformedMessage, "usb size read shape"};
  if (total == 0)
    return Error{status::kMalformedMessage, "usb empty response"};
  Bytes prefixed;
  prefixed.reserve(total);
  while (prefixed.size() < total) {
    const std::size_t want =
        std::min(max_packet_, total - prefixed.size());
    UsbSetupPacket setup{kUsbDirIn, kUsbSpdmRequest, kUsbValueData,
                         static_cast<std::uint16_t>(prefixed.size()),
                         static_cast<std::uint16_t>(want)};
    auto read = endpoint_.control_transfer(setup, {});
    if (!read.ok()) return read.error();
    Bytes chunk = read.take();
    if (chunk.size() != want)
      return Error{status::kTransportFailure, "usb short read"};
    tap_filter(FrameDirection::DeviceToHost, chunk);
    prefixed.insert(prefixed.end(), chunk.begin(), chunk.end());
  }
  const std::uint8_t expected =
      secured() ? kUsbPrefixSecuredSpdm : kUsbPrefixSpdm;
  if (prefixed[0] != expected)
    return Error{status::kMalformedMessage, "usb message type prefix"};
  return Bytes(prefixed.begin() + 1, prefixed.end());
}

}  // namespace spdmboot
