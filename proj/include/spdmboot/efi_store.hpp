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

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spdmboot/bytes.hpp"
#include "spdmboot/certs.hpp"
#include "spdmboot/identity.hpp"
#include "spdmboot/result.hpp"

namespace spdmboot {

struct Guid {
  std::array<std::uint8_t, 16> bytes{};

  std::string to_string() const;
  static Result<Guid> parse(std::string_view text);
  auto operator<=>(const Guid&) const = default;
};

struct EfiVariable {
  Guid guid;
  std::string name;
  std::uint32_t attributes = 0;
  std::optional<std::string> timestamp;
  Bytes data;

  bool operator==(const EfiVariable&) const = default;
};

// Variables are keyed by (guid, name). Records iterate in key order, which
// makes the text serialization canonical.
class VariableStore {
 public:
  Status set(const EfiVariable& var);
  const EfiVariable* get(const Guid& guid, const std::string& name) const;
  bool erase(const Guid& guid, const std::string& name);
  std::size_t size() const { return vars_.size(); }

  void write_protect() { write_protected_ = true; }
  bool write_protected() const { return write_protected_; }

  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  friend Result<VariableStore> tamper_variable(const VariableStore& store, const Guid& guid,
                                               const std::string& name,
                                               const std::function<void(Bytes&)>& edit);
  friend Result<VariableStore> deserialize_store(std::string_view text);

 private:
  std::map<std::pair<Guid, std::string>, EfiVariable> vars_;
  bool write_protected_ = false;
};

std::string serialize_store(const VariableStore& store);
Result<VariableStore> deserialize_store(std::string_view text);

// Harness escape hatch: byte-level edit of one variable's payload in a copy
// of the store, ignoring write protection. The identity edit yields an
// identical store.
Result<VariableStore> tamper_variable(const VariableStore& store, const Guid& guid,
                                      const std::string& name,
                                      const std::function<void(Bytes&)>& edit);

struct FlashImage {
  Bytes code_section;
  VariableStore variables;
};

// Well-known variable names consumed by the boot flow.
namespace var {
inline constexpr const char* kPk = "PK";
inline constexpr const char* kKek = "KEK";
inline constexpr const char* kDb = "db";
inline constexpr const char* kExpectedHcrtm = "ExpectedHcrtm";
inline constexpr const char* kHcrtmSignature = "HcrtmSignature";
inline constexpr const char* kRequesterChain = "RequesterSpdmCertChain";
inline constexpr const char* kRequesterKey = "RequesterSpdmPrivateKey";
std::string responder_chain_name(const std::string& device_id);
}  // namespace var

// Writes the trust anchors, signed boot-code digest, firmware SPDM identity,
// and one expected responder chain per device id under the platform GUID.
Status provision_store(VariableStore& store, const Guid& platform_guid,
                       const TrustAnchorSet& anchors, const SignedDigest& hcrtm,
                       const EndpointIdentity& requester,
                       const std::vector<std::pair<std::string, Bytes>>& responder_chains);

}  // namespace spdmboot
