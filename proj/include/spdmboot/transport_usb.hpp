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

#include <functional>

#include "spdmboot/transport.hpp"

namespace spdmboot {

// Control transfers on endpoint zero carry the protocol. Messages gain a
// one-byte type prefix (0x05 clear, 0x06 secured) and move in packets of at
// most 64 bytes; a short packet or a zero-length packet ends a transfer.
inline constexpr std::uint8_t kUsbSpdmRequest = 0x32;
inline constexpr std::uint8_t kUsbGetDescriptor = 0x06;
inline constexpr std::uint8_t kUsbPrefixSpdm = 0x05;
inline constexpr std::uint8_t kUsbPrefixSecuredSpdm = 0x06;
inline constexpr std::size_t kUsbMaxPacket = 64;
// bmRequestType: class request to an interface, both directions.
inline constexpr std::uint8_t kUsbDirOut = 0x21;
inline constexpr std::uint8_t kUsbDirIn = 0xa1;
inline constexpr std::uint8_t kUsbDirInStandard = 0x80;
// wValue selector on device-to-host reads: 0 asks for the two-byte
// wTotalSize, 1 reads response bytes starting at offset wIndex.
inline constexpr std::uint16_t kUsbValueSize = 0;
inline constexpr std::uint16_t kUsbValueData = 1;

struct UsbSetupPacket {
  std::uint8_t bmRequestType = 0;
  std::uint8_t bRequest = 0;
  std::uint16_t wValue = 0;
  std::uint16_t wIndex = 0;
  std::uint16_t wLength = 0;
};

Bytes usb_encode_setup(const UsbSetupPacket& setup);
Result<UsbSetupPacket> usb_decode_setup(ByteSpan bytes);

class UsbControlEndpoint {
 public:
  virtual ~UsbControlEndpoint() = default;
  // data carries the OUT stage payload; IN transfers return the read bytes.
  virtual Result<Bytes> control_transfer(const UsbSetupPacket& setup,
                                         ByteSpan data) = 0;
};

// Device-side reassembly and response staging for one SPDM-capable function.
class UsbSpdmFunction final : public UsbControlEndpoint {
 public:
  using Handler = std::function<Result<Bytes>(ByteSpan message, bool secured)>;

  explicit UsbSpdmFunction(Handler handler,
                           std::size_t max_packet = kUsbMaxPacket,
                           std::uint16_t id_vendor = 0x1d6b,
                           std::uint16_t id_product = 0x0104);

  Result<Bytes> control_transfer(const UsbSetupPacket& setup,
                                 ByteSpan data) override;
  // Drops any half-assembled request and unserved response bytes.
  void discard_buffers();
  Bytes device_descriptor() const;

 private:
  Result<Bytes> handle_out(const UsbSetupPacket& setup, ByteSpan data);
  Result<Bytes> handle_in(const UsbSetupPacket& setup);
  Status dispatch();

  Handler handler_;
  std::size_t max_packet_;
  std::uint16_t id_vendor_;
  std::uint16_t id_product_;
  Bytes rx_;
  Bytes pending_tx_;
};

// Host side. max_packet must match the function's endpoint-zero packet
// size; short-packet termination depends on the two agreeing.
class UsbTransport final : public TransportBinding {
 public:
  explicit UsbTransport(UsbControlEndpoint& endpoint,
                        std::size_t max_packet = kUsbMaxPacket)
      : endpoint_(endpoint), max_packet_(max_packet) {}

  Status send_request(ByteSpan message) override;
  Result<Bytes> receive_response() override;
  std::string_view name() const override { return "usb-control"; }

 private:
  UsbControlEndpoint& endpoint_;
  std::size_t max_packet_;
  bool request_in_flight_ = false;
};

}  // namespace spdmboot
