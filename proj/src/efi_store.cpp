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

#include "spdmboot/efi_store.hpp"

#include <charconv>
#include <sstream>

namespace spdmboot {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";
// Dash positions of the 8-4-4-4-12 text form.
constexpr std::size_t kDashAt[] = {8, 13, 18, 23};

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string Guid::to_string() const {
  std::string out;
  out.reserve(36);
  std::size_t dash = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (dash < 4 && out.size() == kDashAt[dash]) {
      out.push_back('-');
      ++dash;
    }
    out.push_back(kHexDigits[bytes[i] >> 4]);
    out.push_back(kHexDigits[bytes[i] & 0x0f]);
  }
  return out;
}

Result<Guid> Guid::parse(std::string_view text) {
  if (text.size() != 36) {
    return Result<Guid>::failure(status::kParseError, "guid must be 36 characters");
  }
  Guid g;
  std::size_t byte = 0;
  std::size_t dash = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (dash < 4 && i == kDashAt[dash]) {
      if (text[i] != '-') {
        return Result<Guid>::failure(status::kParseError, "guid dash misplaced");
      }
      ++i;
      ++dash;
      continue;
    }
    int hi = hex_value(text[i]);
    int lo = hex_value(text[i + 1]);
    if (hi < 0 || lo < 0) {
      return Result<Guid>::failure(status::kParseError, "guid has non-hex characters");
    }
    g.bytes[byte++] = static_cast<std::uint8_t>((hi << 4) | lo);
    i += 2;
  }
  return g;
}

Status VariableStore::set(const EfiVariable& var) {
  if (write_protected_) {
    return fail_status(status::kUnexpectedOrder, "store is write-protected");
  }
  vars_[{var.guid, var.name}] = var;
  return ok_status();
}

const EfiVariable* VariableStore::get(const Guid& guid, const std::string& name) const {
  auto it = vars_.find({guid, name});
  return it == vars_.end() ? nullptr : &it->second;
}

bool VariableStore::erase(const Guid& guid, const std::string& name) {
  if (write_protected_) return false;
  return vars_.erase({guid, name}) > 0;
}

std::string serialize_store(const VariableStore& store) {
  std::ostringstream out;
  out << "# efi variable store\n";
  out << "store_version: 1\n";
  out << "write_protected: " << (store.write_protected() ? 1 : 0) << "\n";
  for (const auto& [key, var] : store) {
    out << "\nvariable:\n";
    out << "guid: " << var.guid.to_string() << "\n";
    out << "name: " << var.name << "\n";
    out << "attributes: " << var.attributes << "\n";
    if (var.timestamp) out << "timestamp: " << *var.timestamp << "\n";
    out << "data_b64: " << base64_encode(var.data) << "\n";
  }
  return out.str();
}

namespace {

Status parse_error(std::size_t line_no, const std::string& what) {
  return fail_status(status::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

// "key: value" split; returns false when the line has no colon.
bool split_field(std::string_view line, std::string_view& key, std::string_view& value) {
  auto pos = line.find(':');
  if (pos == std::string_view::npos) return false;
  key = line.substr(0, pos);
  value = line.substr(pos + 1);
  while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
  return true;
}

}  // namespace

Result<VariableStore> deserialize_store(std::string_view text) {
  VariableStore store;
  std::optional<EfiVariable> current;
  bool have_guid = false, have_name = false, have_attrs = false, have_data = false;
  std::size_t line_no = 0;

  auto flush = [&]() -> Status {
    if (!current) return ok_status();
    if (!have_guid || !have_name || !have_attrs || !have_data) {
      return parse_error(line_no, "record for '" + current->name + "' is missing fields");
    }
    if (store.vars_.count({current->guid, current->name}) > 0) {
      return parse_error(line_no, "duplicate variable '" + current->name + "'");
    }
    store.vars_[{current->guid, current->name}] = *current;
    current.reset();
    have_guid = have_name = have_attrs = have_data = false;
    return ok_status();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    if (line == "variable:") {
      if (auto s = flush(); !s.ok()) return s.error();
      current.emplace();
      continue;
    }
    std::string_view key, value;
    if (!split_field(line, key, value)) {
      return Result<VariableStore>::failure(status::kParseError,
                                            "line " + std::to_string(line_no) + ": not a field");
    }
    if (!current) {
      if (key == "store_version") {
        if (value != "1") return parse_error(line_no, "unsupported store_version").error();
      } else if (key == "write_protected") {
        if (value != "0" && value != "1") return parse_error(line_no, "bad write_protected").error();
        store.write_protected_ = value == "1";
      } else {
        return parse_error(line_no, "unknown header field").error();
      }
      continue;
    }
    if (key == "guid") {
      auto g = Guid::parse(value);
      if (!g.ok()) return parse_error(line_no, g.error().message).error();
      current->guid = g.take();
      have_guid = true;
    } else if (key == "name") {
      if (value.empty()) return parse_error(line_no, "empty name").error();
      current->name = std::string(value);
      have_name = true;
    } else if (key == "attributes") {
      std::uint32_t attrs = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), attrs);
      if (ec != std::errc() || p != value.data() + value.size()) {
        return parse_error(line_no, "bad attributes").error();
      }
      current->attributes = attrs;
      have_attrs = true;
    } else if (key == "timestamp") {
      current->timestamp = std::string(value);
    } else if (key == "data_b64") {
      Bytes data;
      if (!base64_decode(value, data)) {
        return parse_error(line_no, "malformed base64 payload").error();
      }
      current->data = std::move(data);
      have_data = true;
    } else {
      return parse_error(line_no, "unknown field '" + std::string(key) + "'").error();
    }
  }
  if (auto s = flush(); !s.ok()) return s.error();
  return store;
}

Result<VariableStore> tamper_variable(const VariableStore& store, const Guid& guid,
                                      const std::string& name,
                                      const std::function<void(Bytes&)>& edit) {
  VariableStore copy = store;
  auto it = copy.vars_.find({guid, name});
  if (it == copy.vars_.end()) {
    return Result<VariableStore>::failure(status::kMissingInput,
                                          "variable '" + name + "' not present");
  }
  edit(it->second.data);
  return copy;
}

namespace var {
std::string responder_chain_name(const std::string& device_id) {
  return std::string("ResponderSpdmCertChain.") + device_id;
}
}  // namespace var

namespace {

constexpr std::uint32_t kProvisionAttributes = 0x27;
constexpr const char* kProvisionTimestamp = "2026-01-01T00:00:00Z";

EfiVariable make_var(const Guid& guid, const char* name, Bytes data) {
  EfiVariable v;
  v.guid = guid;
  v.name = name;
  v.attributes = kProvisionAttributes;
  v.timestamp = kProvisionTimestamp;
  v.data = std::move(data);
  return v;
}

}  // namespace

Status provision_store(VariableStore& store, const Guid& platform_guid,
                       const TrustAnchorSet& anchors, const SignedDigest& hcrtm,
                       const EndpointIdentity& requester,
                       const std::vector<std::pair<std::string, Bytes>>& responder_chains) {
  if (hcrtm.digest.empty() || hcrtm.signature.empty()) {
    return fail_status(status::kMissingInput, "provisioning requires a signed boot-code digest");
  }
  if (requester.chain_blob.empty() || requester.key.private_key.empty()) {
    return fail_status(status::kMissingInput, "provisioning requires the firmware SPDM identity");
  }
  auto pk_blob = build_cert_chain_blob(anchors.pk);
  if (!pk_blob.ok()) return pk_blob.error();
  auto kek_blob = build_cert_chain_blob(anchors.kek);
  if (!kek_blob.ok()) return kek_blob.error();
  Bytes db_blob;
  for (const auto& digest : anchors.db) {
    if (digest.size() != kSha256Size) {
      return fail_status(status::kMissingInput, "db entries must be fixed-width digests");
    }
    db_blob.insert(db_blob.end(), digest.begin(), digest.end());
  }

  if (auto s = store.set(make_var(platform_guid, var::kPk, pk_blob.take())); !s.ok()) return s;
  if (auto s = store.set(make_var(platform_guid, var::kKek, kek_blob.take())); !s.ok()) return s;
  if (auto s = store.set(make_var(platform_guid, var::kDb, db_blob)); !s.ok()) return s;
  if (auto s = store.set(make_var(platform_guid, var::kExpectedHcrtm, hcrtm.digest)); !s.ok())
    return s;
  if (auto s = store.set(make_var(platform_guid, var::kHcrtmSignature, hcrtm.signature)); !s.ok())
    return s;
  if (auto s = store.set(make_var(platform_guid, var::kRequesterChain, requester.chain_blob));
      !s.ok())
    return s;
  if (auto s = store.set(make_var(platform_guid, var::kRequesterKey, requester.key.private_key));
      !s.ok())
    return s;
  for (const auto& [device_id, blob] : responder_chains) {
    if (blob.empty()) {
      return fail_status(status::kMissingInput, "empty responder chain for " + device_id);
    }
    EfiVariable v = make_var(platform_guid, "", blob);
    v.name = var::responder_chain_name(device_id);
    if (auto s = store.set(v); !s.ok()) return s;
  }
  return ok_status();
}

}  // namespace spdmboot
