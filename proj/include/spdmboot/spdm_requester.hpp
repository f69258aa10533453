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

#include <set>
#include <string>
#include <vector>

#include "spdmboot/crypto.hpp"
#include "spdmboot/spdm_common.hpp"
#include "spdmboot/transport.hpp"

namespace spdmboot {

struct RequesterConfig {
  std::vector<SpdmVersion> versions{{1, 3}, {1, 2}};
  std::uint32_t capabilities = cap::kCert | cap::kChallenge | cap::kMeasure | cap::kKeyExchange |
                               cap::kMutualAuth | cap::kEncapsulated;
  std::vector<std::uint16_t> asym{alg::kAsymRsa2048Sha256};
  std::vector<std::uint16_t> hash{alg::kHashSha256};
  std::vector<std::uint16_t> dhe{alg::kDheFfdhe2048};
  std::vector<std::uint16_t> aead{alg::kAeadAes128Gcm};
  // Lets GET_MEASUREMENTS run before CHALLENGE; verification then leans on
  // the expected chain instead of a challenge-authenticated one.
  bool allow_unauthenticated_measurements = false;
};

// Digests of chains that already passed verification this boot. A hit lets
// the requester skip the GET_CERTIFICATE fetch.
class DigestCache {
 public:
  bool contains(const Bytes& digest) const { return entries_.count(digest) > 0; }
  void insert(const Bytes& digest) { entries_.insert(digest); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<Bytes> entries_;
};

// Firmware-side protocol driver. One instance per connection; the digest
// cache and message counter are shared across a boot.
class SpdmRequester {
 public:
  SpdmRequester(Bytes own_chain_blob, Bytes own_private_key, CryptoProvider& crypto,
                RandomSource& rng, DigestCache* digest_cache = nullptr,
                std::uint64_t* message_counter = nullptr, RequesterConfig config = {});

  // Trust anchor for the peer; must be set before authenticate().
  void set_expected_peer_chain(Bytes chain_blob);

  // GET_VERSION / GET_CAPABILITIES / NEGOTIATE_ALGORITHMS.
  Status init_connection(TransportBinding& transport);
  // GET_DIGESTS, conditional GET_CERTIFICATE, CHALLENGE.
  Status authenticate(TransportBinding& transport);
  Result<std::vector<MeasurementBlock>> get_measurements(TransportBinding& transport,
                                                         std::uint8_t index = kAllMeasurementIndices);
  // Basic mutual authentication over the encapsulated channel.
  Status run_basic_mutual_auth(TransportBinding& transport);
  Result<SessionState> establish_session(TransportBinding& transport, bool mutual_auth);

  const ConnectionContext& context() const { return ctx_; }
  const SessionState& session() const { return session_; }
  // Transcript hashes snapshotted for PCR extension.
  const Bytes& challenge_transcript_hash() const { return challenge_th_; }
  const Bytes& measurement_transcript_hash() const { return measurement_th_; }
  bool fetched_certificate() const { return fetched_certificate_; }
  const Bytes& last_challenge_nonce() const { return last_challenge_nonce_; }

 private:
  struct Exchanged {
    SpdmMessage msg;
    Bytes raw;
  };
  Result<Exchanged> exchange(TransportBinding& transport, const SpdmMessage& msg,
                             MessageKind expect, Bytes* request_raw = nullptr);
  Status fail_with(std::uint32_t code, std::string message);
  Result<SpdmMessage> answer_encapsulated(const SpdmMessage& inner_request);

  Bytes own_chain_blob_;
  Bytes own_private_key_;
  CryptoProvider& crypto_;
  RandomSource& rng_;
  DigestCache* digest_cache_;
  std::uint64_t* message_counter_;
  RequesterConfig config_;

  ConnectionContext ctx_;
  Bytes expected_chain_blob_;
  Bytes peer_leaf_key_;
  Bytes challenge_th_;
  Bytes measurement_th_;
  Bytes last_challenge_nonce_;
  Bytes encap_transcript_;
  SessionState session_;
  bool fetched_certificate_ = false;
};

}  // namespace spdmboot
