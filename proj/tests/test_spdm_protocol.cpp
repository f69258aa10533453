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

#include "doctest.h"
#include "spdmboot/result.hpp"
#include "spdmboot/spdm_requester.hpp"
#include "spdmboot/spdm_responder.hpp"
#include "spdmboot/virtual_device.hpp"
#include "test_helpers.hpp"

using namespace spdmboot;
using spdmboot::testing::LoopbackTransport;
using spdmboot::testing::fixture_identity;

namespace {

struct Rig {
  SeededRandom rng;
  CryptoProvider crypto;
  SpdmResponder responder;
  SpdmRequester requester;
  LoopbackTransport transport;

  explicit Rig(std::uint64_t seed = 1000, ResponderConfig rsp_config = {},
               RequesterConfig req_config = {}, Bytes responder_chain_override = {},
               Bytes trusted_requester_override = {})
      : rng(seed),
        crypto(rng),
        responder("dev", responder_chain_override.empty()
                             ? fixture_identity("proto-dev").chain_blob
                             : responder_chain_override,
                  fixture_identity("proto-dev").key.private_key,
                  trusted_requester_override.empty()
                      ? fixture_identity("proto-req").chain_blob
                      : trusted_requester_override,
                  device_measurements("dev", make_firmware_blob("dev", "nvme-storage")),
                  crypto, rng, rsp_config),
        requester(fixture_identity("proto-req").chain_blob,
                  fixture_identity("proto-req").key.private_key, crypto, rng, nullptr, nullptr,
                  req_config),
        transport(responder) {
    requester.set_expected_peer_chain(fixture_identity("proto-dev").chain_blob);
  }
};

}  // namespace

TEST_CASE("VCA negotiation settles version, capabilities, and algorithms") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  const auto& ctx = rig.requester.context();
  CHECK(ctx.state == ConnectionState::VcaDone);
  CHECK(ctx.negotiated_version == SpdmVersion{1, 3});
  CHECK((ctx.peer_capabilities & cap::kCert) != 0);
  CHECK(ctx.algorithms.asym == alg::kAsymRsa2048Sha256);
  CHECK(ctx.algorithms.hash == alg::kHashSha256);
  CHECK_FALSE(ctx.transcript_vca.empty());
  // Both sides accumulated the identical negotiation transcript.
  CHECK(ctx.transcript_vca == rig.responder.context().transcript_vca);
}

TEST_CASE("init_connection twice is an ordering error") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  auto again = rig.requester.init_connection(rig.transport);
  REQUIRE_FALSE(again.ok());
  CHECK(again.error().code == status::kUnexpectedOrder);
}

TEST_CASE("version mismatch fails the negotiation") {
  ResponderConfig rsp;
  rsp.versions = {{2, 0}};
  Rig rig(1001, rsp);
  auto st = rig.requester.init_connection(rig.transport);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kVersionMismatch);
  CHECK(rig.requester.context().state == ConnectionState::Failed);
}

TEST_CASE("disjoint algorithm sets fail the negotiation") {
  ResponderConfig rsp;
  rsp.asym = {0x7777};
  Rig rig(1002, rsp);
  auto st = rig.requester.init_connection(rig.transport);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kNoCommonAlgorithm);
}

TEST_CASE("challenge authentication verifies the genuine chain") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  CHECK(rig.requester.context().state == ConnectionState::Authenticated);
  CHECK(rig.requester.fetched_certificate());
  CHECK(rig.requester.challenge_transcript_hash().size() == kSha256Size);
}

TEST_CASE("authenticate requires completed negotiation and a configured anchor") {
  Rig rig;
  auto early = rig.requester.authenticate(rig.transport);
  REQUIRE_FALSE(early.ok());
  CHECK(early.error().code == status::kUnexpectedOrder);

  SeededRandom rng(1003);
  CryptoProvider crypto(rng);
  SpdmRequester bare(fixture_identity("proto-req").chain_blob,
                     fixture_identity("proto-req").key.private_key, crypto, rng);
  SpdmResponder responder("dev", fixture_identity("proto-dev").chain_blob,
                          fixture_identity("proto-dev").key.private_key,
                          fixture_identity("proto-req").chain_blob, {}, crypto, rng);
  LoopbackTransport t(responder);
  REQUIRE(bare.init_connection(t).ok());
  auto st = bare.authenticate(t);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kMissingInput);
}

TEST_CASE("a presented chain differing from the anchor is rejected as authentication failure") {
  Bytes flipped = fixture_identity("proto-dev").chain_blob;
  flipped[flipped.size() / 2] ^= 0x01;
  Rig rig(1004, {}, {}, flipped);
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  auto st = rig.requester.authenticate(rig.transport);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kAuthentication);
  CHECK(rig.requester.context().state == ConnectionState::Failed);
}

TEST_CASE("digest cache skips the certificate fetch on a later connection") {
  DigestCache cache;
  std::uint64_t messages = 0;
  SeededRandom rng(1005);
  CryptoProvider crypto(rng);
  const auto& dev = fixture_identity("proto-dev");
  const auto& req = fixture_identity("proto-req");
  auto meas = device_measurements("dev", make_firmware_blob("dev", "nvme-storage"));

  SpdmResponder first("dev", dev.chain_blob, dev.key.private_key, req.chain_blob, meas, crypto,
                      rng);
  SpdmRequester r1(req.chain_blob, req.key.private_key, crypto, rng, &cache, &messages);
  r1.set_expected_peer_chain(dev.chain_blob);
  LoopbackTransport t1(first);
  REQUIRE(r1.init_connection(t1).ok());
  REQUIRE(r1.authenticate(t1).ok());
  CHECK(r1.fetched_certificate());
  CHECK(cache.size() == 1);
  std::uint64_t first_cost = messages;

  SpdmResponder second("dev", dev.chain_blob, dev.key.private_key, req.chain_blob, meas, crypto,
                       rng);
  SpdmRequester r2(req.chain_blob, req.key.private_key, crypto, rng, &cache, &messages);
  r2.set_expected_peer_chain(dev.chain_blob);
  LoopbackTransport t2(second);
  messages = 0;
  REQUIRE(r2.init_connection(t2).ok());
  REQUIRE(r2.authenticate(t2).ok());
  CHECK_FALSE(r2.fetched_certificate());
  // One request/response pair saved: GET_CERTIFICATE never went out.
  CHECK(messages == first_cost - 2);
}

TEST_CASE("measurements verify against the signed transcript and clear m1m2") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto blocks = rig.requester.get_measurements(rig.transport);
  REQUIRE(blocks.ok());

  auto want = device_measurements("dev", make_firmware_blob("dev", "nvme-storage"));
  CHECK(blocks.value() == want);
  CHECK(rig.requester.measurement_transcript_hash().size() == kSha256Size);
  CHECK(rig.requester.context().transcript_m1m2.empty());
  CHECK(rig.requester.context().state == ConnectionState::Measured);
}

TEST_CASE("measurements before authentication are refused by default") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  auto blocks = rig.requester.get_measurements(rig.transport);
  REQUIRE_FALSE(blocks.ok());
  CHECK(blocks.error().code == status::kUnexpectedOrder);
}

TEST_CASE("measurement-before-challenge is allowed only by explicit opt-in") {
  RequesterConfig req;
  req.allow_unauthenticated_measurements = true;
  Rig rig(1006, {}, req);
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  auto blocks = rig.requester.get_measurements(rig.transport);
  REQUIRE(blocks.ok());
  CHECK(blocks.value().size() == 2);
}

TEST_CASE("basic mutual authentication completes over the encapsulated channel") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  CHECK_FALSE(rig.responder.mutual_auth_complete());
  REQUIRE(rig.requester.run_basic_mutual_auth(rig.transport).ok());
  CHECK(rig.responder.mutual_auth_complete());
}

TEST_CASE("basic mutual auth rejects a requester whose chain is not the trusted copy") {
  Bytes wrong_trust = fixture_identity("proto-req").chain_blob;
  wrong_trust[wrong_trust.size() - 1] ^= 0xff;
  Rig rig(1007, {}, {}, {}, wrong_trust);
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto st = rig.requester.run_basic_mutual_auth(rig.transport);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kAuthentication);
  CHECK_FALSE(rig.responder.mutual_auth_complete());
}

TEST_CASE("basic mutual auth fails when the requester signs with the wrong key") {
  SeededRandom rng(1008);
  CryptoProvider crypto(rng);
  const auto& dev = fixture_identity("proto-dev");
  const auto& req = fixture_identity("proto-req");
  Bytes bad_key = req.key.private_key;
  bad_key[bad_key.size() / 2] ^= 0x55;

  SpdmResponder responder("dev", dev.chain_blob, dev.key.private_key, req.chain_blob,
                          device_measurements("dev", make_firmware_blob("dev", "nvme-storage")),
                          crypto, rng);
  SpdmRequester requester(req.chain_blob, bad_key, crypto, rng);
  requester.set_expected_peer_chain(dev.chain_blob);
  LoopbackTransport t(responder);
  REQUIRE(requester.init_connection(t).ok());
  REQUIRE(requester.authenticate(t).ok());
  auto st = requester.run_basic_mutual_auth(t);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kAuthentication);
}

TEST_CASE("session establishment derives matching secrets on both sides") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto session = rig.requester.establish_session(rig.transport, false);
  REQUIRE(session.ok());
  CHECK(session.value().established);
  CHECK(session.value().handshake_secret == rig.responder.session().handshake_secret);
  CHECK(session.value().data_secret == rig.responder.session().data_secret);
  CHECK(session.value().session_id == rig.responder.session().session_id);
  CHECK(rig.requester.context().state == ConnectionState::SessionEstablished);
}

TEST_CASE("session with mutual auth marks the responder side complete") {
  Rig rig;
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto session = rig.requester.establish_session(rig.transport, true);
  REQUIRE(session.ok());
  CHECK(rig.responder.mutual_auth_complete());
}

TEST_CASE("responders that require mutual auth refuse a plain session") {
  ResponderConfig rsp;
  rsp.require_session_mutual_auth = true;
  Rig rig(1009, rsp);
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto session = rig.requester.establish_session(rig.transport, false);
  REQUIRE_FALSE(session.ok());
  CHECK(session.error().code == status::kAuthentication);
}

TEST_CASE("session mutual auth rejects an untrusted requester chain at key exchange") {
  Bytes wrong_trust = fixture_identity("proto-req").chain_blob;
  wrong_trust[10] ^= 0x80;
  ResponderConfig rsp;
  rsp.require_session_mutual_auth = true;
  Rig rig(1010, rsp, {}, {}, wrong_trust);
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto session = rig.requester.establish_session(rig.transport, true);
  REQUIRE_FALSE(session.ok());
  CHECK(session.error().code == status::kAuthentication);
}

TEST_CASE("ephemeral substitution is caught by the finish confirm check") {
  Rig rig(1011);
  rig.responder.inject_ephemeral_substitution();
  REQUIRE(rig.requester.init_connection(rig.transport).ok());
  REQUIRE(rig.requester.authenticate(rig.transport).ok());
  auto session = rig.requester.establish_session(rig.transport, false);
  REQUIRE_FALSE(session.ok());
  CHECK(session.error().code == status::kHandshakeMismatch);
  CHECK_FALSE(rig.responder.session().established);
}

TEST_CASE("responder answers pre-negotiation requests with an ordering error") {
  Rig rig;
  SpdmMessage challenge = make_message({1, 3}, MessageKind::Challenge,
                                       ChallengeBody{rig.rng.bytes(32)});
  auto rsp = decode_message(rig.responder.dispatch(encode_message(challenge)));
  REQUIRE(rsp.ok());
  REQUIRE(rsp.value().kind == MessageKind::ErrorRsp);
  CHECK(std::get<ErrorBody>(rsp.value().body).code == status::kUnexpectedOrder);
}

TEST_CASE("responder answers garbage with a malformed-message error") {
  Rig rig;
  auto rsp = decode_message(rig.responder.dispatch(Bytes{0xde, 0xad}));
  REQUIRE(rsp.ok());
  REQUIRE(rsp.value().kind == MessageKind::ErrorRsp);
  CHECK(std::get<ErrorBody>(rsp.value().body).code == status::kMalformedMessage);
}

TEST_CASE("a failed responder context answers everything with an error") {
  ResponderConfig rsp;
  rsp.versions = {{2, 0}};
  Rig rig(1012, rsp);
  CHECK_FALSE(rig.requester.init_connection(rig.transport).ok());

  SpdmMessage get_digests = make_message({1, 3}, MessageKind::GetDigests, GetDigestsBody{});
  auto reply = decode_message(rig.responder.dispatch(encode_message(get_digests)));
  REQUIRE(reply.ok());
  CHECK(reply.value().kind == MessageKind::ErrorRsp);
}

TEST_CASE("requester surfaces transport failures distinctly") {
  struct FailingTransport final : TransportBinding {
    Status send_request(ByteSpan) override {
      return fail_status(status::kTransportFailure, "wire broken");
    }
    Result<Bytes> receive_response() override {
      return Result<Bytes>::failure(status::kTransportFailure, "wire broken");
    }
    std::string_view name() const override { return "broken"; }
  } broken;

  SeededRandom rng(1013);
  CryptoProvider crypto(rng);
  SpdmRequester requester(fixture_identity("proto-req").chain_blob,
                          fixture_identity("proto-req").key.private_key, crypto, rng);
  auto st = requester.init_connection(broken);
  REQUIRE_FALSE(st.ok());
  CHECK(st.error().code == status::kTransportFailure);
}
