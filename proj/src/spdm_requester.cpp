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

#include "spdmboot/spdm_requester.hpp"

#include <algorithm>

namespace spdmboot {

namespace {
constexpr std::size_t kNonceSize = 32;
}

SpdmRequester::SpdmRequester(Bytes own_chain_blob, Bytes own_private_key, CryptoProvider& crypto,
                             RandomSource& rng, DigestCache* digest_cache,
                             std::uint64_t* message_counter, RequesterConfig config)
    : own_chain_blob_(std::move(own_chain_blob)),
      own_private_key_(std::move(own_private_key)),
      crypto_(crypto),
      rng_(rng),
      digest_cache_(digest_cache),
      message_counter_(message_counter),
      config_(std::move(config)) {
  ctx_.role = SpdmRole::Requester;
  ctx_.local_capabilities = config_.capabilities;
}

void SpdmRequester::set_expected_peer_chain(Bytes chain_blob) {
  expected_chain_blob_ = std::move(chain_blob);
}

Status SpdmRequester::fail_with(std::uint32_t code, std::string message) {
  ctx_.fail(code);
  return fail_status(code, std::move(message));
}

Result<SpdmRequester::Exchanged> SpdmRequester::exchange(TransportBinding& transport,
                                                         const SpdmMessage& msg,
                                                         MessageKind expect, Bytes* request_raw) {
  Bytes request = encode_message(msg);
  if (request_raw != nullptr) *request_raw = request;
  if (message_counter_ != nullptr) ++*message_counter_;
  if (auto s = transport.send_request(request); !s.ok()) {
    ctx_.fail(status::kTransportFailure);
    return Result<Exchanged>::failure(status::kTransportFailure, s.error().message);
  }
  auto raw = transport.receive_response();
  if (!raw.ok()) {
    ctx_.fail(status::kTransportFailure);
    return Result<Exchanged>::failure(status::kTransportFailure, raw.error().message);
  }
  if (message_counter_ != nullptr) ++*message_counter_;
  auto decoded = decode_message(raw.value());
  if (!decoded.ok()) {
    ctx_.fail(status::kMalformedMessage);
    return Result<Exchanged>::failure(status::kMalformedMessage, decoded.error().message);
  }
  if (decoded.value().kind == MessageKind::ErrorRsp) {
    std::uint32_t code = std::get<ErrorBody>(decoded.value().body).code;
    ctx_.fail(code);
    return Result<Exchanged>::failure(code, std::string("peer reported ") +
                                                std::to_string(code));
  }
  if (decoded.value().kind != expect) {
    ctx_.fail(status::kUnexpectedOrder);
    return Result<Exchanged>::failure(status::kUnexpectedOrder, "unexpected response kind");
  }
  Exchanged out;
  out.msg = decoded.take();
  out.raw = raw.take();
  return out;
}

Status SpdmRequester::init_connection(TransportBinding& transport) {
  if (ctx_.state != ConnectionState::Fresh) {
    return fail_with(status::kUnexpectedOrder, "connection already initialized");
  }
  SpdmMessage get_version;
  get_version.version = SpdmVersion{1, 0};
  get_version.kind = MessageKind::GetVersion;
  get_version.body = GetVersionBody{};
  Bytes req_raw;
  auto version = exchange(transport, get_version, MessageKind::Version, &req_raw);
  if (!version.ok()) return version.error();
  ctx_.append_vca(req_raw);
  ctx_.append_vca(version.value().raw);
  const auto& offered = std::get<VersionBody>(version.value().msg.body).versions;
  auto pick = std::find_if(config_.versions.begin(), config_.versions.end(),
                           [&](const SpdmVersion& v) {
                             return std::find(offered.begin(), offered.end(), v) != offered.end();
                           });
  if (pick == config_.versions.end()) {
    return fail_with(status::kVersionMismatch, "no common version");
  }
  ctx_.negotiated_version = *pick;

  SpdmMessage get_caps = make_message(ctx_.negotiated_version, MessageKind::GetCapabilities,
                                      GetCapabilitiesBody{config_.capabilities});
  auto caps = exchange(transport, get_caps, MessageKind::Capabilities, &req_raw);
  if (!caps.ok()) return caps.error();
  ctx_.append_vca(req_raw);
  ctx_.append_vca(caps.value().raw);
  ctx_.peer_capabilities = std::get<CapabilitiesBody>(caps.value().msg.body).flags;

  NegotiateAlgorithmsBody nego;
  nego.asym = config_.asym;
  nego.hash = config_.hash;
  nego.dhe = config_.dhe;
  nego.aead = config_.aead;
  SpdmMessage nego_msg =
      make_message(ctx_.negotiated_version, MessageKind::NegotiateAlgorithms, std::move(nego));
  auto algs = exchange(transport, nego_msg, MessageKind::Algorithms, &req_raw);
  if (!algs.ok()) return algs.error();
  ctx_.append_vca(req_raw);
  ctx_.append_vca(algs.value().raw);
  const auto& sel = std::get<AlgorithmsBody>(algs.value().msg.body);
  auto supported = [](const std::vector<std::uint16_t>& list, std::uint16_t v) {
    return std::find(list.begin(), list.end(), v) != list.end();
  };
  if (!supported(config_.asym, sel.asym) || !supported(config_.hash, sel.hash) ||
      !supported(config_.dhe, sel.dhe) || !supported(config_.aead, sel.aead)) {
    return fail_with(status::kNoCommonAlgorithm, "responder selected unsupported algorithms");
  }
  ctx_.algorithms = {sel.asym, sel.hash, sel.dhe, sel.aead};
  ctx_.advance(ConnectionState::VcaDone);
  return ok_status();
}

Status SpdmRequester::authenticate(TransportBinding& transport) {
  if (ctx_.state == ConnectionState::Failed || ctx_.state < ConnectionState::VcaDone) {
    return fail_with(status::kUnexpectedOrder, "authenticate requires completed negotiation");
  }
  if (expected_chain_blob_.empty()) {
    return fail_with(status::kMissingInput, "no expected peer chain configured");
  }
  if ((ctx_.peer_capabilities & cap::kCert) == 0 ||
      (ctx_.peer_capabilities & cap::kChallenge) == 0) {
    return fail_with(status::kCapabilityMissing, "peer lacks certificate or challenge support");
  }

  ctx_.seed_m1m2();
  Bytes req_raw;
  SpdmMessage get_digests =
      make_message(ctx_.negotiated_version, MessageKind::GetDigests, GetDigestsBody{});
  auto digests = exchange(transport, get_digests, MessageKind::Digests, &req_raw);
  if (!digests.ok()) return digests.error();
  ctx_.append_m1m2(req_raw);
  ctx_.append_m1m2(digests.value().raw);
  const auto& digest_list = std::get<DigestsBody>(digests.value().msg.body).digests;
  if (digest_list.size() != 1 || digest_list[0].size() != kSha256Size) {
    return fail_with(status::kMalformedMessage, "unexpected digest list");
  }
  ctx_.peer_cert_digests = digest_list;

  Bytes expected_digest = crypto_.sha256(expected_chain_blob_);
  bool cached = digest_cache_ != nullptr && digest_list[0] == expected_digest &&
                digest_cache_->contains(digest_list[0]);
  if (cached) {
    // Verified in previous communications; skip the chain fetch.
    ctx_.peer_cert_chain_blob = expected_chain_blob_;
  } else {
    SpdmMessage get_cert =
        make_message(ctx_.negotiated_version, MessageKind::GetCertificate, GetCertificateBody{0});
    auto cert = exchange(transport, get_cert, MessageKind::CertificateRsp, &req_raw);
    if (!cert.ok()) return cert.error();
    fetched_certificate_ = true;
    ctx_.append_m1m2(req_raw);
    ctx_.append_m1m2(cert.value().raw);
    const auto& presented = std::get<CertificateRspBody>(cert.value().msg.body).chain_blob;
    // Byte compare against the provisioned copy comes first; a mismatched
    // chain is rejected without any signature work.
    if (presented != expected_chain_blob_) {
      return fail_with(status::kAuthentication, "certificate chain mismatch");
    }
    auto parsed = parse_cert_chain_blob(presented);
    if (!parsed.ok() || !verify_chain(parsed.value())) {
      return fail_with(status::kAuthentication, "certificate chain verification failed");
    }
    ctx_.peer_cert_chain_blob = presented;
  }
  auto leaf_key = chain_blob_leaf_key(ctx_.peer_cert_chain_blob);
  if (!leaf_key.ok()) {
    return fail_with(status::kAuthentication, "unusable peer certificate chain");
  }
  peer_leaf_key_ = leaf_key.take();

  ChallengeBody challenge;
  challenge.nonce = rng_.bytes(kNonceSize);
  last_challenge_nonce_ = challenge.nonce;
  SpdmMessage challenge_msg =
      make_message(ctx_.negotiated_version, MessageKind::Challenge, std::move(challenge));
  auto auth = exchange(transport, challenge_msg, MessageKind::ChallengeAuth, &req_raw);
  if (!auth.ok()) return auth.error();
  ctx_.append_m1m2(req_raw);
  Bytes th = crypto_.sha256(ctx_.transcript_m1m2);
  auto body = std::get<ChallengeAuthBody>(auth.value().msg.body);
  if (body.transcript_hash != th) {
    return fail_with(status::kAuthentication, "transcript hash mismatch");
  }
  if (!crypto_.verify(body.transcript_hash, body.signature, peer_leaf_key_)) {
    return fail_with(status::kAuthentication, "challenge signature verification failed");
  }
  if (body.cert_chain_digest != crypto_.sha256(ctx_.peer_cert_chain_blob)) {
    return fail_with(status::kAuthentication, "challenge chain digest mismatch");
  }
  body.signature.clear();
  SpdmMessage tbs = auth.value().msg;
  tbs.body = std::move(body);
  ctx_.append_m1m2(encode_message(tbs));

  if (digest_cache_ != nullptr) digest_cache_->insert(digest_list[0]);
  challenge_th_ = th;
  ctx_.advance(ConnectionState::Authenticated);
  return ok_status();
}

Result<std::vector<MeasurementBlock>> SpdmRequester::get_measurements(TransportBinding& transport,
                                                                      std::uint8_t index) {
  using R = Result<std::vector<MeasurementBlock>>;
  if (ctx_.state == ConnectionState::Failed || ctx_.state < ConnectionState::VcaDone) {
    auto s = fail_with(status::kUnexpectedOrder, "measurements require completed negotiation");
    return R::failure(s.error().code, s.error().message);
  }
  if (ctx_.state < ConnectionState::Authenticated &&
      !config_.allow_unauthenticated_measurements) {
    // Advised order: prove the chain before trusting measurement signatures.
    auto s = fail_with(status::kUnexpectedOrder, "measurements before authentication");
    return R::failure(s.error().code, s.error().message);
  }
  if ((ctx_.peer_capabilities & cap::kMeasure) == 0) {
    auto s = fail_with(status::kCapabilityMissing, "peer lacks measurement support");
    return R::failure(s.error().code, s.error().message);
  }
  Bytes verify_key = peer_leaf_key_;
  if (verify_key.empty()) {
    if (expected_chain_blob_.empty()) {
      auto s = fail_with(status::kMissingInput, "no expected peer chain configured");
      return R::failure(s.error().code, s.error().message);
    }
    auto leaf = chain_blob_leaf_key(expected_chain_blob_);
    if (!leaf.ok()) {
      auto s = fail_with(status::kAuthentication, "unusable expected chain");
      return R::failure(s.error().code, s.error().message);
    }
    verify_key = leaf.take();
  }

  GetMeasurementsBody req;
  req.index = index;
  req.nonce = rng_.bytes(kNonceSize);
  SpdmMessage req_msg =
      make_message(ctx_.negotiated_version, MessageKind::GetMeasurements, std::move(req));
  Bytes req_raw;
  auto rsp = exchange(transport, req_msg, MessageKind::Measurements, &req_raw);
  if (!rsp.ok()) return R::failure(rsp.error().code, rsp.error().message);

  auto body = std::get<MeasurementsBody>(rsp.value().msg.body);
  for (const auto& block : body.blocks) {
    if (block.value.size() != digest_size(HashAlgorithm::Sha256)) {
      auto s = fail_with(status::kMalformedMessage, "measurement width mismatch");
      return R::failure(s.error().code, s.error().message);
    }
  }
  Bytes signature = body.signature;
  body.signature.clear();
  SpdmMessage tbs = rsp.value().msg;
  tbs.body = body;
  Bytes l1l2 = concat({ctx_.transcript_vca, req_raw, encode_message(tbs)});
  Bytes l_hash = crypto_.sha256(l1l2);
  if (!crypto_.verify(l_hash, signature, verify_key)) {
    auto s = fail_with(status::kAuthentication, "measurement signature verification failed");
    return R::failure(s.error().code, s.error().message);
  }
  measurement_th_ = l_hash;
  ctx_.transcript_m1m2.clear();
  ctx_.advance(std::max(ctx_.state, ConnectionState::Measured));
  return body.blocks;
}

Result<SpdmMessage> SpdmRequester::answer_encapsulated(const SpdmMessage& inner_request) {
  switch (inner_request.kind) {
    case MessageKind::GetDigests: {
      DigestsBody body;
      body.digests.push_back(crypto_.sha256(own_chain_blob_));
      return make_message(ctx_.negotiated_version, MessageKind::Digests, std::move(body));
    }
    case MessageKind::GetCertificate: {
      CertificateRspBody body;
      body.slot = std::get<GetCertificateBody>(inner_request.body).slot;
      body.chain_blob = own_chain_blob_;
      return make_message(ctx_.negotiated_version, MessageKind::CertificateRsp, std::move(body));
    }
    case MessageKind::Challenge: {
      Bytes th = crypto_.sha256(encap_transcript_);
      ChallengeAuthBody body;
      body.cert_chain_digest = crypto_.sha256(own_chain_blob_);
      body.nonce = rng_.bytes(kNonceSize);
      body.transcript_hash = th;
      auto sig = crypto_.sign(th, own_private_key_);
      if (!sig.ok()) return Result<SpdmMessage>::failure(sig.error().code, sig.error().message);
      SpdmMessage tbs =
          make_message(ctx_.negotiated_version, MessageKind::ChallengeAuth, body);
      Bytes tbs_bytes = encode_message(tbs);
      encap_transcript_.insert(encap_transcript_.end(), tbs_bytes.begin(), tbs_bytes.end());
      body.signature = sig.take();
      return make_message(ctx_.negotiated_version, MessageKind::ChallengeAuth, std::move(body));
    }
    default:
      return Result<SpdmMessage>::failure(status::kUnexpectedOrder,
                                          "unsupported encapsulated request");
  }
}

Status SpdmRequester::run_basic_mutual_auth(TransportBinding& transport) {
  if (ctx_.state == ConnectionState::Failed || ctx_.state < ConnectionState::Authenticated) {
    return fail_with(status::kUnexpectedOrder, "mutual auth requires prior authentication");
  }
  if ((ctx_.peer_capabilities & cap::kMutualAuth) == 0 ||
      (ctx_.peer_capabilities & cap::kEncapsulated) == 0) {
    return fail_with(status::kCapabilityMissing, "peer cannot run encapsulated mutual auth");
  }
  if (own_chain_blob_.empty() || own_private_key_.empty()) {
    return fail_with(status::kMissingInput, "requester identity not provisioned");
  }
  encap_transcript_ = ctx_.transcript_vca;

  EncapsulatedResponseBody out;
  out.seq = 0;
  for (;;) {
    SpdmMessage out_msg =
        make_message(ctx_.negotiated_version, MessageKind::EncapsulatedResponse, out);
    auto rsp = exchange(transport, out_msg, MessageKind::EncapsulatedRequest);
    if (!rsp.ok()) return rsp.error();
    const auto& body = std::get<EncapsulatedRequestBody>(rsp.value().msg.body);
    if (body.done) {
      if (body.spdm_status != 0) {
        return fail_with(body.spdm_status, "responder rejected mutual authentication");
      }
      ctx_.mutual_auth_complete = true;
      return ok_status();
    }
    auto inner = decode_message(body.inner);
    if (!inner.ok()) {
      return fail_with(status::kMalformedMessage, "bad encapsulated request");
    }
    encap_transcript_.insert(encap_transcript_.end(), body.inner.begin(), body.inner.end());
    auto answer = answer_encapsulated(inner.value());
    if (!answer.ok()) {
      return fail_with(answer.error().code, answer.error().message);
    }
    out.seq = body.seq;
    out.inner = encode_message(answer.value());
    // Unsigned answers enter the mutual transcript whole; the challenge
    // answer already appended its to-be-signed form.
    if (inner.value().kind != MessageKind::Challenge) {
      encap_transcript_.insert(encap_transcript_.end(), out.inner.begin(), out.inner.end());
    }
  }
}

Result<SessionState> SpdmRequester::establish_session(TransportBinding& transport,
                                                      bool mutual_auth) {
  using R = Result<SessionState>;
  if (ctx_.state != ConnectionState::Authenticated && ctx_.state != ConnectionState::Measured) {
    auto s = fail_with(status::kUnexpectedOrder, "session requires authenticated state");
    return R::failure(s.error().code, s.error().message);
  }
  if ((ctx_.peer_capabilities & cap::kKeyExchange) == 0) {
    auto s = fail_with(status::kCapabilityMissing, "peer lacks key exchange support");
    return R::failure(s.error().code, s.error().message);
  }
  if (mutual_auth && (own_chain_blob_.empty() || own_private_key_.empty())) {
    auto s = fail_with(status::kMissingInput, "requester identity not provisioned");
    return R::failure(s.error().code, s.error().message);
  }

  DhKeyPair eph = crypto_.dh_generate();
  KeyExchangeBody ke;
  ke.req_session_id = rng_.next_u16();
  ke.nonce = rng_.bytes(kNonceSize);
  ke.exchange_data = eph.public_value;
  ke.mutual_auth_requested = mutual_auth;
  if (mutual_auth) ke.requester_chain_blob = own_chain_blob_;
  SpdmMessage ke_msg =
      make_message(ctx_.negotiated_version, MessageKind::KeyExchange, std::move(ke));
  Bytes ke_raw;
  auto ker = exchange(transport, ke_msg, MessageKind::KeyExchangeRsp, &ke_raw);
  if (!ker.ok()) return R::failure(ker.error().code, ker.error().message);

  auto body = std::get<KeyExchangeRspBody>(ker.value().msg.body);
  Bytes signature = body.signature;
  body.signature.clear();
  SpdmMessage tbs = ker.value().msg;
  tbs.body = body;
  Bytes sig_hash = crypto_.sha256(concat({ctx_.transcript_vca, ke_raw, encode_message(tbs)}));
  if (!crypto_.verify(sig_hash, signature, peer_leaf_key_)) {
    auto s = fail_with(status::kAuthentication, "key exchange signature verification failed");
    return R::failure(s.error().code, s.error().message);
  }
  auto shared = crypto_.dh_shared_secret(eph.private_scalar, body.exchange_data);
  if (!shared.ok()) {
    auto s = fail_with(status::kMalformedMessage, "bad responder exchange data");
    return R::failure(s.error().code, s.error().message);
  }
  Bytes tx_hash = crypto_.sha256(concat({ctx_.transcript_vca, ke_raw, ker.value().raw}));
  Bytes handshake = crypto_.sha256(concat({shared.value(), tx_hash}));
  Bytes data = crypto_.sha256(concat({handshake, to_bytes("finish"), tx_hash}));

  FinishBody finish;
  finish.mutual_auth = mutual_auth;
  if (mutual_auth) {
    auto sig = crypto_.sign(concat({tx_hash, to_bytes("finish-mutual")}), own_private_key_);
    if (!sig.ok()) {
      auto s = fail_with(status::kMalformedMessage, "cannot sign finish");
      return R::failure(s.error().code, s.error().message);
    }
    finish.signature = sig.take();
  }
  finish.confirm = crypto_.sha256(concat({handshake, to_bytes("finish-confirm-req")}));
  SpdmMessage finish_msg =
      make_message(ctx_.negotiated_version, MessageKind::Finish, std::move(finish));
  auto finish_rsp = exchange(transport, finish_msg, MessageKind::FinishRsp);
  if (!finish_rsp.ok()) return R::failure(finish_rsp.error().code, finish_rsp.error().message);
  const auto& rsp_body = std::get<FinishRspBody>(finish_rsp.value().msg.body);
  Bytes expect_confirm = crypto_.sha256(concat({handshake, to_bytes("finish-confirm-rsp")}));
  if (rsp_body.confirm != expect_confirm) {
    auto s = fail_with(status::kHandshakeMismatch, "finish confirm mismatch");
    return R::failure(s.error().code, s.error().message);
  }

  session_.session_id = (static_cast<std::uint32_t>(
                             std::get<KeyExchangeBody>(ke_msg.body).req_session_id)
                         << 16) |
                        body.rsp_session_id;
  session_.handshake_secret = std::move(handshake);
  session_.data_secret = std::move(data);
  session_.established = true;
  ctx_.advance(ConnectionState::SessionEstablished);
  if (mutual_auth) ctx_.mutual_auth_complete = true;
  return session_;
}

}  // namespace spdmboot
