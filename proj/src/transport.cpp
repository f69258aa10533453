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

#include "spdmboot/transport.hpp"

#include <sstream>

namespace spdmboot {

const char* to_string(FrameDirection d) {
  return d == FrameDirection::HostToDevice ? "host->device" : "device->host";
}

std::string FrameRecord::render() const {
  std::ostringstream out;
  out << "frame binding=" << binding << " dir=" << to_string(direction) << " len=" << length
      << " head=" << head_hex;
  return out.str();
}

void TransportTap::observe(FrameDirection direction, std::string_view binding, ByteSpan frame) {
  FrameRecord rec;
  rec.direction = direction;
  rec.binding = std::string(binding);
  rec.length = frame.size();
  rec.head_hex = hex_head(frame);
  records_.push_back(std::move(rec));
}

void TransportBinding::tap_observe(FrameDirection direction, ByteSpan frame) {
  if (tap_ != nullptr) tap_->observe(direction, name(), frame);
}

void TransportBinding::tap_filter(FrameDirection direction, Bytes& payload) {
  if (tap_ == nullptr) return;
  if (tap_->data_modifier) tap_->data_modifier(direction, name(), payload);
  tap_->observe(direction, name(), payload);
}

}  // namespace spdmboot
