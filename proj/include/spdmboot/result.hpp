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

#include <cassert>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

namespace spdmboot {

// Status codes shared by the protocol ERROR message, transport errors, and
// boot event outcomes. 0x80000030 is fixed by the boot diagnostics contract;
// the rest are allocated from 0x80000001.
namespace status {
inline constexpr std::uint32_t kUnexpectedOrder = 0x80000001;
inline constexpr std::uint32_t kVersionMismatch = 0x80000002;
inline constexpr std::uint32_t kNoCommonAlgorithm = 0x80000003;
inline constexpr std::uint32_t kMalformedMessage = 0x80000004;
inline constexpr std::uint32_t kTransportFailure = 0x80000005;
inline constexpr std::uint32_t kHandshakeMismatch = 0x80000006;
inline constexpr std::uint32_t kCapabilityMissing = 0x80000007;
inline constexpr std::uint32_t kSmmLocked = 0x80000008;
inline constexpr std::uint32_t kNoBootDevice = 0x80000009;
inline constexpr std::uint32_t kFirmwareIntegrity = 0x8000000A;
inline constexpr std::uint32_t kFirmwareAuthenticity = 0x8000000B;
inline constexpr std::uint32_t kMissingInput = 0x8000000C;
inline constexpr std::uint32_t kParseError = 0x8000000D;
inline constexpr std::uint32_t kUnsupportedAlgorithm = 0x8000000E;
inline constexpr std::uint32_t kOverflow = 0x8000000F;
inline constexpr std::uint32_t kAuthentication = 0x80000030;
}  // namespace status

struct Error {
  std::uint32_t code = 0;
  std::string message;
};

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error e) : v_(std::move(e)) {}

  static Result failure(std::uint32_t code, std::string message) {
    return Result(Error{code, std::move(message)});
  }

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<T>(v_);
  }
  T& value() {
    assert(ok());
    return std::get<T>(v_);
  }
  T take() {
    assert(ok());
    return std::move(std::get<T>(v_));
  }
  const Error& error() const {
    assert(!ok());
    return std::get<Error>(v_);
  }

 private:
  std::variant<T, Error> v_;
};

using Status = Result<std::monostate>;

inline Status ok_status() { return Status(std::monostate{}); }
inline Status fail_status(std::uint32_t code, std::string message) {
  return Status(Error{code, std::move(message)});
}

}  // namespace spdmboot
