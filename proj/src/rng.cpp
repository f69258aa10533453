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

#include "spdmboot/rng.hpp"

namespace spdmboot {

Bytes RandomSource::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t RandomSource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | buf[i];
  return v;
}

std::uint16_t RandomSource::next_u16() {
  std::uint8_t buf[2];
  fill(buf);
  return static_cast<std::uint16_t>((buf[0] << 8) | buf[1]);
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  // One engine step yields eight bytes; consume most-significant first so the
  // byte stream is a pure function of the seed, independent of call slicing
  // only at 8-byte granularity (callers here always draw whole buffers).
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t v = gen_();
    for (int b = 7; b >= 0 && i < out.size(); --b) {
      out[i++] = static_cast<std::uint8_t>(v >> (8 * b));
    }
  }
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = static_cast<std::uint8_t>(dev_());
}

}  // namespace spdmboot
