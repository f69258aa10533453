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

#include <string>
#include <vector>

#include "spdmboot/crypto.hpp"
#include "spdmboot/spdm_common.hpp"

namespace spdmboot {

struct ResponderConfig {
  std::vector<SpdmVersion> versions{{1, 3}, {1, 2}};
  std::uint32_t capabilities = cap::kCert | cap::kChallenge | cap::kMeasure | cap::kKeyExchange |
                               cap::kMutualAuth | cap::kEncapsulated;
  std::vector<std::uint16_t> asym{alg::kAsymRsa2048Sha256};
  std::vector<std::uint16_t> hash{alg::kHashSha256};
  std::vector<std::uint16_t> dhe{alg::kDheFfdhe2048};
  std::vector<std::uint16_t> aead{alg::kAeadAes128Gcm};
  // Devices that refuse sessions without proving the requester's identity.
  bool require_session_mutual_auth = false;
};

// Device-side protocol engine. Serves its provisioned certificate chain and
// measurements, and verifies the requester against the trusted chain copy
// captured when the platform was assembled.
class SpdmResponder {
 public:
  SpdmResponder(std::string id, Bytes cert_chain_blob, Bytes private_key,
                Bytes trusted_requester_chain_blob, std::vector<MeasurementBlock> measurements,
                CryptoProvider& crypto, RandomSource& rng, ResponderConfig config = {});

  // Always yields an encoded response; protocol failures come back as ERROR
  // messages. A failed context answers everything with ERROR.
  Bytes dispatch(ByteSpan request);

  const std::string& id() const { return id_; }
  const ConnectionContext& context() const { return ctx_; }
  bool mutual_auth_complete() const { return ctx_.mutual_auth_complete; }
  const SessionState& session() const { return session_; }
  const Bytes& cert_chain_blob() const { return cert_chain_blob_; }

  // Derives the session secrets from one ephemeral pair but advertises a
  // different public value. The signature still verifies, so the mismatch
  // only surfaces through the FINISH confirm check.
  void inject_ephemeral_substitution() { fault_substitute_ephemeral_ = true; }

 private:
  enum class VcaStep { None, Version, Capabilities, Done };
  enum class EncapPhase { Idle, AwaitDigests, AwaitCertificate, AwaitChallengeAuth, Done };

  SpdmMessage handle(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_get_version(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_get_capabilities(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_negotiate_algorithms(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_get_digests(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_get_certificate(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_challenge(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_get_measurements(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_key_exchange(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_finish(const SpdmMessage& msg, ByteSpan raw);
  SpdmMessage handle_encapsulated(const SpdmMessage& msg, ByteSpan raw);

  SpdmMessage encap_issue_challenge(std::uint8_t echo_seq);
  SpdmMessage encap_done(std::uint8_t seq, std::uint32_t spdm_status);

  SpdmMessage error_only(std::uint32_t code);
  SpdmMessage error_and_fail(std::uint32_t code);
  SpdmMessage response(MessageKind kind, MessageBody body);
  bool vca_ready() const { return vca_step_ == VcaStep::Done; }

  std::string id_;
  Bytes cert_chain_blob_;
  Bytes private_key_;
  Bytes trusted_requester_chain_;
  std::vector<MeasurementBlock> measurements_;
  CryptoProvider& crypto_;
  RandomSource& rng_;
  ResponderConfig config_;

  ConnectionContext ctx_;
  VcaStep vca_step_ = VcaStep::None;

  EncapPhase encap_phase_ = EncapPhase::Idle;
  std::uint8_t encap_seq_ = 0;
  Bytes encap_transcript_;

  // Session material staged at KEY_EXCHANGE, committed at FINISH.
  SessionState session_;
  Bytes session_tx_hash_;
  bool session_pending_ = false;
  bool session_mutual_ = false;

  bool fault_substitute_ephemeral_ = false;
};

}  // namespace spdmboot
