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

#include <optional>
#include <vector>

#include "spdmboot/bytes.hpp"
#include "spdmboot/certs.hpp"
#include "spdmboot/spdm_messages.hpp"

namespace spdmboot {

enum class SpdmRole { Requester, Responder };

// Coarse connection progress. Transitions only move forward; Failed is
// absorbing.
enum class ConnectionState {
  Fresh,
  VcaDone,
  Authenticated,
  Measured,
  SessionEstablished,
  Failed,
};
const char* to_string(ConnectionState s);

struct AlgorithmSelection {
  std::uint16_t asym = 0;
  std::uint16_t hash = 0;
  std::uint16_t dhe = 0;
  std::uint16_t aead = 0;
  bool operator==(const AlgorithmSelection&) const = default;
};

struct SessionState {
  std::uint32_t session_id = 0;
  Bytes handshake_secret;
  Bytes data_secret;
  bool established = false;
};

// One logical requester/responder pairing. Confined to a single flow; a new
// connection starts from a fresh context.
struct ConnectionContext {
  SpdmRole role = SpdmRole::Requester;
  SpdmVersion negotiated_version{};
  std::uint32_t local_capabilities = 0;
  std::uint32_t peer_capabilities = 0;
  AlgorithmSelection algorithms;
  // Raw encoded messages: vca covers the three negotiation exchanges; m1m2
  // accumulates digest/certificate/challenge traffic and is emptied when a
  // measurement exchange completes.
  Bytes transcript_vca;
  Bytes transcript_m1m2;
  std::vector<Bytes> peer_cert_digests;
  Bytes peer_cert_chain_blob;
  ConnectionState state = ConnectionState::Fresh;
  std::uint32_t failure_code = 0;
  bool mutual_auth_complete = false;

  void fail(std::uint32_t code);
  // Moves to `next` unless it would go backward or the context has failed.
  // Returns false (and fails the context) on a backward request.
  bool advance(ConnectionState next);
  // Seeds m1m2 with the VCA bytes when a challenge-path message arrives on an
  // empty transcript; keeps repeat challenges bound to the negotiation.
  void seed_m1m2();
  void append_vca(ByteSpan message);
  void append_m1m2(ByteSpan message);
};

}  // namespace spdmboot
