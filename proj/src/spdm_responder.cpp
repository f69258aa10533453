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

#include "spdmboot/spdm_responder.hpp"

#include <algorithm>

namespace spdmboot {

namespace {

constexpr std::size_t kNonceSize = 32;

bool list_contains(const std::vector<std::uint16_t>& list, std::uint16_t v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

// First entry of `wanted` that the local side also supports.
std::uint16_t pick_common(const std::vector<std::uint16_t>& wanted,
                          const std::vector<std::uint16_t>& supported) {
  for (auto v : wanted) {
    if (list_contains(supported, v)) return v;
  }
  return 0;
}

}  // namespace

SpdmResponder::SpdmResponder(std::string id, Bytes cert_chain_blob, Bytes private_key,
                             Bytes trusted_requester_chain_blob,
                             std::vector<MeasurementBlock> measurements, CryptoProvider& crypto,
                             RandomSource& rng, ResponderConfig config)
    : id_(std::move(id)),
      cert_chain_blob_(std::move(cert_chain_blob)),
      private_key_(std::move(private_key)),
      trusted_requester_chain_(std::move(trusted_requester_chain_blob)),
      measurements_(std::move(measurements)),
      crypto_(crypto),
      rng_(rng),
      config_(std::move(config)) {
  ctx_.role = SpdmRole::Responder;
  ctx_.local_capabilities = config_.capabilities;
}

SpdmMessage SpdmResponder::response(MessageKind kind, MessageBody body) {
  SpdmMessage m;
  m.version = ctx_.negotiated_version;
  m.kind = kind;
  m.body = std::move(body);
  return m;
}

SpdmMessage SpdmResponder::error_only(std::uint32_t code) {
  return response(MessageKind::ErrorRsp, ErrorBody{code});
}

SpdmMessage SpdmResponder::error_and_fail(std::uint32_t code) {
  ctx_.fail(code);
  return error_only(code);
}

Bytes SpdmResponder::dispatch(ByteSpan request) {
  auto decoded = decode_message(request);
  if (!decoded.ok()) {
    // Garbled input is rejected statelessly; the connection survives.
    return encode_message(error_only(status::kMalformedMessage));
  }
  if (ctx_.state == ConnectionState::Failed) {
    return encode_message(error_only(ctx_.failure_code));
  }
  return encode_message(handle(decoded.value(), request));
}

SpdmMessage SpdmResponder::handle(const SpdmMessage& msg, ByteSpan raw) {
  switch (msg.kind) {
    case MessageKind::GetVersion: return handle_get_version(msg, raw);
    case MessageKind::GetCapabilities: return handle_get_capabilities(msg, raw);
    case MessageKind::NegotiateAlgorithms: return handle_negotiate_algorithms(msg, raw);
    case MessageKind::GetDigests: return handle_get_digests(msg, raw);
    case MessageKind::GetCertificate: return handle_get_certificate(msg, raw);
    case MessageKind::Challenge: return handle_challenge(msg, raw);
    case MessageKind::GetMeasurements: return handle_get_measurements(msg, raw);
    case MessageKind::KeyExchange: return handle_key_exchange(msg, raw);
    case MessageKind::Finish: return handle_finish(msg, raw);
    case MessageKind::EncapsulatedResponse: return handle_encapsulated(msg, raw);
    default:
      return error_and_fail(status::kUnexpectedOrder);
  }
}

SpdmMessage SpdmResponder::handle_get_version(const SpdmMessage&, ByteSpan raw) {
  if (vca_step_ != VcaStep::None) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  ctx_.append_vca(raw);
  VersionBody body;
  body.versions = config_.versions;
  // The version handshake itself runs at the base version.
  SpdmMessage rsp;
  rsp.version = SpdmVersion{1, 0};
  rsp.kind = MessageKind::Version;
  rsp.body = std::move(body);
  ctx_.append_vca(encode_message(rsp));
  vca_step_ = VcaStep::Version;
  return rsp;
}

SpdmMessage SpdmResponder::handle_get_capabilities(const SpdmMessage& msg, ByteSpan raw) {
  if (vca_step_ != VcaStep::Version) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  // The requester's header version is its pick from our VERSION list.
  bool known = std::find(config_.versions.begin(), config_.versions.end(), msg.version) !=
               config_.versions.end();
  if (!known) {
    return error_and_fail(status::kVersionMismatch);
  }
  ctx_.negotiated_version = msg.version;
  ctx_.peer_capabilities = std::get<GetCapabilitiesBody>(msg.body).flags;
  ctx_.append_vca(raw);
  SpdmMessage rsp = response(MessageKind::Capabilities, CapabilitiesBody{config_.capabilities});
  ctx_.append_vca(encode_message(rsp));
  vca_step_ = VcaStep::Capabilities;
  return rsp;
}

SpdmMessage SpdmResponder::handle_negotiate_algorithms(const SpdmMessage& msg, ByteSpan raw) {
  if (vca_step_ != VcaStep::Capabilities) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  const auto& body = std::get<NegotiateAlgorithmsBody>(msg.body);
  AlgorithmSelection sel;
  sel.asym = pick_common(body.asym, config_.asym);
  sel.hash = pick_common(body.hash, config_.hash);
  sel.dhe = pick_common(body.dhe, config_.dhe);
  sel.aead = pick_common(body.aead, config_.aead);
  if (sel.asym == 0 || sel.hash == 0 || sel.dhe == 0 || sel.aead == 0) {
    return error_and_fail(status::kNoCommonAlgorithm);
  }
  ctx_.algorithms = sel;
  ctx_.append_vca(raw);
  SpdmMessage rsp =
      response(MessageKind::Algorithms, AlgorithmsBody{sel.asym, sel.hash, sel.dhe, sel.aead});
  ctx_.append_vca(encode_message(rsp));
  vca_step_ = VcaStep::Done;
  ctx_.advance(ConnectionState::VcaDone);
  return rsp;
}

SpdmMessage SpdmResponder::handle_get_digests(const SpdmMessage&, ByteSpan raw) {
  if (!vca_ready()) return error_and_fail(status::kUnexpectedOrder);
  ctx_.seed_m1m2();
  ctx_.append_m1m2(raw);
  DigestsBody body;
  body.digests.push_back(crypto_.sha256(cert_chain_blob_));
  SpdmMessage rsp = response(MessageKind::Digests, std::move(body));
  ctx_.append_m1m2(encode_message(rsp));
  return rsp;
}

SpdmMessage SpdmResponder::handle_get_certificate(const SpdmMessage& msg, ByteSpan raw) {
  if (!vca_ready()) return error_and_fail(status::kUnexpectedOrder);
  ctx_.seed_m1m2();
  ctx_.append_m1m2(raw);
  CertificateRspBody body;
  body.slot = std::get<GetCertificateBody>(msg.body).slot;
  body.chain_blob = cert_chain_blob_;
  SpdmMessage rsp = response(MessageKind::CertificateRsp, std::move(body));
  ctx_.append_m1m2(encode_message(rsp));
  return rsp;
}

SpdmMessage SpdmResponder::handle_challenge(const SpdmMessage&, ByteSpan raw) {
  if (!vca_ready()) return error_and_fail(status::kUnexpectedOrder);
  ctx_.seed_m1m2();
  ctx_.append_m1m2(raw);
  // The transcript hash covers everything up to and including CHALLENGE; the
  // response then joins the transcript in to-be-signed form.
  Bytes th = crypto_.sha256(ctx_.transcript_m1m2);
  ChallengeAuthBody body;
  body.cert_chain_digest = crypto_.sha256(cert_chain_blob_);
  body.nonce = rng_.bytes(kNonceSize);
  body.transcript_hash = th;
  auto sig = crypto_.sign(th, private_key_);
  if (!sig.ok()) return error_and_fail(status::kMalformedMessage);
  SpdmMessage tbs = response(MessageKind::ChallengeAuth, body);
  ctx_.append_m1m2(encode_message(tbs));
  body.signature = sig.take();
  ctx_.advance(ConnectionState::Authenticated);
  return response(MessageKind::ChallengeAuth, std::move(body));
}

SpdmMessage SpdmResponder::handle_get_measurements(const SpdmMessage& msg, ByteSpan raw) {
  if (!vca_ready()) return error_and_fail(status::kUnexpectedOrder);
  const auto& req = std::get<GetMeasurementsBody>(msg.body);
  MeasurementsBody body;
  for (const auto& block : measurements_) {
    if (req.index == kAllMeasurementIndices || req.index == block.index) {
      body.blocks.push_back(block);
    }
  }
  body.nonce = rng_.bytes(kNonceSize);
  SpdmMessage tbs = response(MessageKind::Measurements, body);
  Bytes l1l2 = concat({ctx_.transcript_vca, raw, encode_message(tbs)});
  auto sig = crypto_.sign(crypto_.sha256(l1l2), private_key_);
  if (!sig.ok()) return error_and_fail(status::kMalformedMessage);
  body.signature = sig.take();
  // A completed measurement exchange retires the challenge transcript.
  ctx_.transcript_m1m2.clear();
  ctx_.advance(std::max(ctx_.state, ConnectionState::Measured));
  return response(MessageKind::Measurements, std::move(body));
}

SpdmMessage SpdmResponder::handle_key_exchange(const SpdmMessage& msg, ByteSpan raw) {
  if (!vca_ready()) return error_and_fail(status::kUnexpectedOrder);
  const auto& ke = std::get<KeyExchangeBody>(msg.body);
  if (config_.require_session_mutual_auth && !ke.mutual_auth_requested) {
    return error_and_fail(status::kAuthentication);
  }
  if (ke.mutual_auth_requested && ke.requester_chain_blob != trusted_requester_chain_) {
    return error_and_fail(status::kAuthentication);
  }
  DhKeyPair eph = crypto_.dh_generate();
  auto shared = crypto_.dh_shared_secret(eph.private_scalar, ke.exchange_data);
  if (!shared.ok()) return error_and_fail(status::kMalformedMessage);

  KeyExchangeRspBody body;
  body.rsp_session_id = rng_.next_u16();
  body.nonce = rng_.bytes(kNonceSize);
  body.exchange_data =
      fault_substitute_ephemeral_ ? crypto_.dh_generate().public_value : eph.public_value;

  SpdmMessage tbs = response(MessageKind::KeyExchangeRsp, body);
  Bytes sig_hash = crypto_.sha256(concat({ctx_.transcript_vca, raw, encode_message(tbs)}));
  auto sig = crypto_.sign(sig_hash, private_key_);
  if (!sig.ok()) return error_and_fail(status::kMalformedMessage);
  body.signature = sig.take();
  SpdmMessage full = response(MessageKind::KeyExchangeRsp, body);

  session_tx_hash_ = crypto_.sha256(concat({ctx_.transcript_vca, raw, encode_message(full)}));
  Bytes handshake = crypto_.sha256(concat({shared.value(), session_tx_hash_}));
  Bytes data =
      crypto_.sha256(concat({handshake, to_bytes("finish"), session_tx_hash_}));
  session_.session_id = (static_cast<std::uint32_t>(ke.req_session_id) << 16) |
                        body.rsp_session_id;
  session_.handshake_secret = std::move(handshake);
  session_.data_secret = std::move(data);
  session_.established = false;
  session_pending_ = true;
  session_mutual_ = ke.mutual_auth_requested;
  return full;
}

SpdmMessage SpdmResponder::handle_finish(const SpdmMessage& msg, ByteSpan) {
  if (!session_pending_) return error_and_fail(status::kUnexpectedOrder);
  const auto& finish = std::get<FinishBody>(msg.body);
  if (session_mutual_) {
    if (!finish.mutual_auth) return error_and_fail(status::kAuthentication);
    auto leaf_key = chain_blob_leaf_key(trusted_requester_chain_);
    if (!leaf_key.ok()) return error_and_fail(status::kAuthentication);
    Bytes signed_data = concat({session_tx_hash_, to_bytes("finish-mutual")});
    if (!crypto_.verify(signed_data, finish.signature, leaf_key.value())) {
      return error_and_fail(status::kAuthentication);
    }
  }
  Bytes expect_confirm =
      crypto_.sha256(concat({session_.handshake_secret, to_bytes("finish-confirm-req")}));
  if (finish.confirm != expect_confirm) {
    return error_and_fail(status::kHandshakeMismatch);
  }
  session_.established = true;
  session_pending_ = false;
  ctx_.advance(ConnectionState::SessionEstablished);
  if (session_mutual_) ctx_.mutual_auth_complete = true;
  FinishRspBody body;
  body.confirm =
      crypto_.sha256(concat({session_.handshake_secret, to_bytes("finish-confirm-rsp")}));
  return response(MessageKind::FinishRsp, std::move(body));
}

SpdmMessage SpdmResponder::encap_issue_challenge(std::uint8_t) {
  ChallengeBody inner;
  inner.nonce = rng_.bytes(kNonceSize);
  SpdmMessage inner_msg = response(MessageKind::Challenge, std::move(inner));
  Bytes inner_bytes = encode_message(inner_msg);
  encap_transcript_.insert(encap_transcript_.end(), inner_bytes.begin(), inner_bytes.end());
  encap_phase_ = EncapPhase::AwaitChallengeAuth;
  ++encap_seq_;
  EncapsulatedRequestBody body;
  body.seq = encap_seq_;
  body.inner = std::move(inner_bytes);
  return response(MessageKind::EncapsulatedRequest, std::move(body));
}

SpdmMessage SpdmResponder::encap_done(std::uint8_t seq, std::uint32_t spdm_status) {
  EncapsulatedRequestBody body;
  body.seq = seq;
  body.done = true;
  body.spdm_status = spdm_status;
  if (spdm_status == 0) {
    encap_phase_ = EncapPhase::Done;
    ctx_.mutual_auth_complete = true;
  } else {
    ctx_.fail(spdm_status);
  }
  return response(MessageKind::EncapsulatedRequest, std::move(body));
}

SpdmMessage SpdmResponder::handle_encapsulated(const SpdmMessage& msg, ByteSpan) {
  // Basic mutual authentication rides on the encapsulated channel after the
  // requester has authenticated this responder.
  if (ctx_.state < ConnectionState::Authenticated) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  if ((ctx_.peer_capabilities & cap::kMutualAuth) == 0 ||
      (ctx_.peer_capabilities & cap::kEncapsulated) == 0) {
    return error_and_fail(status::kCapabilityMissing);
  }
  const auto& encap = std::get<EncapsulatedResponseBody>(msg.body);

  if (encap_phase_ == EncapPhase::Idle) {
    if (encap.seq != 0 || !encap.inner.empty()) {
      return error_and_fail(status::kUnexpectedOrder);
    }
    encap_transcript_ = ctx_.transcript_vca;
    SpdmMessage inner = response(MessageKind::GetDigests, GetDigestsBody{});
    Bytes inner_bytes = encode_message(inner);
    encap_transcript_.insert(encap_transcript_.end(), inner_bytes.begin(), inner_bytes.end());
    encap_phase_ = EncapPhase::AwaitDigests;
    encap_seq_ = 1;
    EncapsulatedRequestBody body;
    body.seq = 1;
    body.inner = std::move(inner_bytes);
    return response(MessageKind::EncapsulatedRequest, std::move(body));
  }
  if (encap_phase_ == EncapPhase::Done) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  if (encap.seq != encap_seq_) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  auto inner = decode_message(encap.inner);
  if (!inner.ok()) {
    return error_and_fail(status::kMalformedMessage);
  }

  if (encap_phase_ == EncapPhase::AwaitDigests) {
    if (inner.value().kind != MessageKind::Digests) {
      return error_and_fail(status::kUnexpectedOrder);
    }
    encap_transcript_.insert(encap_transcript_.end(), encap.inner.begin(), encap.inner.end());
    const auto& digests = std::get<DigestsBody>(inner.value().body);
    if (digests.digests.size() == 1 &&
        digests.digests[0] == crypto_.sha256(trusted_requester_chain_)) {
      return encap_issue_challenge(encap.seq);
    }
    SpdmMessage cert_req = response(MessageKind::GetCertificate, GetCertificateBody{0});
    Bytes cert_bytes = encode_message(cert_req);
    encap_transcript_.insert(encap_transcript_.end(), cert_bytes.begin(), cert_bytes.end());
    encap_phase_ = EncapPhase::AwaitCertificate;
    ++encap_seq_;
    EncapsulatedRequestBody body;
    body.seq = encap_seq_;
    body.inner = std::move(cert_bytes);
    return response(MessageKind::EncapsulatedRequest, std::move(body));
  }

  if (encap_phase_ == EncapPhase::AwaitCertificate) {
    if (inner.value().kind != MessageKind::CertificateRsp) {
      return error_and_fail(status::kUnexpectedOrder);
    }
    encap_transcript_.insert(encap_transcript_.end(), encap.inner.begin(), encap.inner.end());
    const auto& cert = std::get<CertificateRspBody>(inner.value().body);
    if (cert.chain_blob != trusted_requester_chain_) {
      return encap_done(encap.seq, status::kAuthentication);
    }
    return encap_issue_challenge(encap.seq);
  }

  // AwaitChallengeAuth
  if (inner.value().kind != MessageKind::ChallengeAuth) {
    return error_and_fail(status::kUnexpectedOrder);
  }
  Bytes th = crypto_.sha256(encap_transcript_);
  auto auth = std::get<ChallengeAuthBody>(inner.value().body);
  if (auth.cert_chain_digest != crypto_.sha256(trusted_requester_chain_) ||
      auth.transcript_hash != th) {
    return encap_done(encap.seq, status::kAuthentication);
  }
  auto leaf_key = chain_blob_leaf_key(trusted_requester_chain_);
  if (!leaf_key.ok() || !crypto_.verify(auth.transcript_hash, auth.signature, leaf_key.value())) {
    return encap_done(encap.seq, status::kAuthentication);
  }
  auth.signature.clear();
  SpdmMessage tbs = inner.value();
  tbs.body = std::move(auth);
  Bytes tbs_bytes = encode_message(tbs);
  encap_transcript_.insert(encap_transcript_.end(), tbs_bytes.begin(), tbs_bytes.end());
  return encap_done(encap.seq, 0);
}

}  // namespace spdmboot
