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
#include <string>
#include <vector>

#include "spdmboot/bytes.hpp"
#include "spdmboot/result.hpp"

namespace spdmboot {

enum class FrameDirection { HostToDevice, DeviceToHost };
const char* to_string(FrameDirection d);

struct FrameRecord {
  FrameDirection direction;
  std::string binding;
  std::size_t length = 0;
  std::string head_hex;

  std::string render() const;
};

// Observes every frame each binding puts on its bus. The data modifier, when
// set, rewrites frame payloads in flight; fault-injection tests use it to
// model a hostile or broken bus.
class TransportTap {
 public:
  void observe(FrameDirection direction, std::string_view binding, ByteSpan frame);
  const std::vector<FrameRecord>& records() const { return records_; }
  void clear() { records_.clear(); }

  std::function<void(FrameDirection, std::string_view binding, Bytes& payload)> data_modifier;

 private:
  std::vector<FrameRecord> records_;
};

// Request/response byte pipe carrying encoded SPDM messages over one of the
// concrete bindings. send_request must complete before receive_response.
class TransportBinding {
 public:
  virtual ~TransportBinding() = default;
  virtual Status send_request(ByteSpan message) = 0;
  virtual Result<Bytes> receive_response() = 0;
  virtual std::string_view name() const = 0;

  void set_tap(TransportTap* tap) { tap_ = tap; }
  void set_secured(bool secured) { secured_ = secured; }
  bool secured() const { return secured_; }

 protected:
  void tap_observe(FrameDirection direction, ByteSpan frame);
  // Runs the tap's modifier over mutable payload bytes, then records them.
  void tap_filter(FrameDirection direction, Bytes& payload);

  TransportTap* tap_ = nullptr;
  bool secured_ = false;
};

}  // namespace spdmboot
