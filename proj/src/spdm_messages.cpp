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

#include "spdmboot/spdm_messages.hpp"

namespace spdmboot {

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::GetVersion: return "GET_VERSION";
    case MessageKind::Version: return "VERSION";
    case MessageKind::GetCapabilities: return "GET_CAPABILITIES";
    case MessageKind::Capabilities: return "CAPABILITIES";
    case MessageKind::NegotiateAlgorithms: return "NEGOTIATE_ALGORITHMS";
    case MessageKind::Algorithms: return "ALGORITHMS";
    case MessageKind::GetDigests: return "GET_DIGESTS";
    case MessageKind::Digests: return "DIGESTS";
    case MessageKind::GetCertificate: return "GET_CERTIFICATE";
    case MessageKind::CertificateRsp: return "CERTIFICATE";
    case MessageKind::Challenge: return "CHALLENGE";
    case MessageKind::ChallengeAuth: return "CHALLENGE_AUTH";
    case MessageKind::GetMeasurements: return "GET_MEASUREMENTS";
    case MessageKind::Measurements: return "MEASUREMENTS";
    case MessageKind::KeyExchange: return "KEY_EXCHANGE";
    case MessageKind::KeyExchangeRsp: return "KEY_EXCHANGE_RSP";
    case MessageKind::Finish: return "FINISH";
    case MessageKind::FinishRsp: return "FINISH_RSP";
    case MessageKind::EncapsulatedResponse: return "ENCAPSULATED_RESPONSE";
    case MessageKind::EncapsulatedRequest: return "ENCAPSULATED_REQUEST";
    case MessageKind::ErrorRsp: return "ERROR";
  }
  return "UNKNOWN";
}

namespace {

void encode_body(ByteWriter&, const GetVersionBody&) {}

void encode_body(ByteWriter& w, const VersionBody& b) {
  w.u8(static_cast<std::uint8_t>(b.versions.size()));
  for (const auto& v : b.versions) {
    w.u8(v.major);
    w.u8(v.minor);
  }
}

void encode_body(ByteWriter& w, const GetCapabilitiesBody& b) { w.u32le(b.flags); }
void encode_body(ByteWriter& w, const CapabilitiesBody& b) { w.u32le(b.flags); }

void encode_u16_list(ByteWriter& w, const std::vector<std::uint16_t>& list) {
  w.u8(static_cast<std::uint8_t>(list.size()));
  for (auto v : list) w.u16le(v);
}

void encode_body(ByteWriter& w, const NegotiateAlgorithmsBody& b) {
  encode_u16_list(w, b.asym);
  encode_u16_list(w, b.hash);
  encode_u16_list(w, b.dhe);
  encode_u16_list(w, b.aead);
}

void encode_body(ByteWriter& w, const AlgorithmsBody& b) {
  w.u16le(b.asym);
  w.u16le(b.hash);
  w.u16le(b.dhe);
  w.u16le(b.aead);
}

void encode_body(ByteWriter&, const GetDigestsBody&) {}

void encode_body(ByteWriter& w, const DigestsBody& b) {
  w.u8(static_cast<std::uint8_t>(b.digests.size()));
  for (const auto& d : b.digests) w.blob8(d);
}

void encode_body(ByteWriter& w, const GetCertificateBody& b) { w.u8(b.slot); }

void encode_body(ByteWriter& w, const CertificateRspBody& b) {
  w.u8(b.slot);
  w.blob16(b.chain_blob);
}

void encode_body(ByteWriter& w, const ChallengeBody& b) { w.blob8(b.nonce); }

void encode_body(ByteWriter& w, const ChallengeAuthBody& b) {
  w.blob8(b.cert_chain_digest);
  w.blob8(b.nonce);
  w.blob8(b.transcript_hash);
  w.blob16(b.signature);
}

void encode_body(ByteWriter& w, const GetMeasurementsBody& b) {
  w.u8(b.index);
  w.blob8(b.nonce);
}

void encode_body(ByteWriter& w, const MeasurementsBody& b) {
  w.u8(static_cast<std::uint8_t>(b.blocks.size()));
  for (const auto& block : b.blocks) {
    w.u8(block.index);
    w.u8(static_cast<std::uint8_t>(block.type));
    w.blob16(block.value);
  }
  w.blob8(b.nonce);
  w.blob16(b.signature);
}

void encode_body(ByteWriter& w, const KeyExchangeBody& b) {
  w.u16le(b.req_session_id);
  w.blob8(b.nonce);
  w.blob16(b.exchange_data);
  w.u8(b.mutual_auth_requested ? 1 : 0);
  w.blob16(b.requester_chain_blob);
}

void encode_body(ByteWriter& w, const KeyExchangeRspBody& b) {
  w.u16le(b.rsp_session_id);
  w.blob8(b.nonce);
  w.blob16(b.exchange_data);
  w.blob16(b.signature);
}

void encode_body(ByteWriter& w, const FinishBody& b) {
  w.u8(b.mutual_auth ? 1 : 0);
  w.blob16(b.signature);
  w.blob8(b.confirm);
}

void encode_body(ByteWriter& w, const FinishRspBody& b) { w.blob8(b.confirm); }

void encode_body(ByteWriter& w, const EncapsulatedResponseBody& b) {
  w.u8(b.seq);
  w.blob16(b.inner);
}

void encode_body(ByteWriter& w, const EncapsulatedRequestBody& b) {
  w.u8(b.seq);
  w.u8(b.done ? 1 : 0);
  w.u32le(b.spdm_status);
  w.blob16(b.inner);
}

void encode_body(ByteWriter& w, const ErrorBody& b) { w.u32le(b.code); }

template <typename Body>
Result<SpdmMessage> finish_decode(SpdmMessage msg, ByteReader& r, Body body) {
  if (!r.done()) {
    return Result<SpdmMessage>::failure(status::kMalformedMessage, "truncated or oversized body");
  }
  msg.body = std::move(body);
  return msg;
}

}  // namespace

Bytes encode_message(const SpdmMessage& msg) {
  ByteWriter w;
  w.u8(msg.version.major);
  w.u8(msg.version.minor);
  w.u8(static_cast<std::uint8_t>(msg.kind));
  w.u8(msg.params[0]);
  w.u8(msg.params[1]);
  std::visit([&](const auto& body) { encode_body(w, body); }, msg.body);
  return w.take();
}

Result<SpdmMessage> decode_message(ByteSpan data) {
  ByteReader r(data);
  SpdmMessage msg;
  msg.version.major = r.u8();
  msg.version.minor = r.u8();
  std::uint8_t kind_code = r.u8();
  msg.params[0] = r.u8();
  msg.params[1] = r.u8();
  if (!r.ok()) {
    return Result<SpdmMessage>::failure(status::kMalformedMessage, "truncated header");
  }
  msg.kind = static_cast<MessageKind>(kind_code);
  switch (msg.kind) {
    case MessageKind::GetVersion:
      return finish_decode(msg, r, GetVersionBody{});
    case MessageKind::Version: {
      VersionBody b;
      std::uint8_t count = r.u8();
      for (std::uint8_t i = 0; i < count; ++i) {
        SpdmVersion v;
        v.major = r.u8();
        v.minor = r.u8();
        b.versions.push_back(v);
      }
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::GetCapabilities: {
      GetCapabilitiesBody b;
      b.flags = r.u32le();
      return finish_decode(msg, r, b);
    }
    case MessageKind::Capabilities: {
      CapabilitiesBody b;
      b.flags = r.u32le();
      return finish_decode(msg, r, b);
    }
    case MessageKind::NegotiateAlgorithms: {
      NegotiateAlgorithmsBody b;
      auto read_list = [&](std::vector<std::uint16_t>& list) {
        std::uint8_t count = r.u8();
        for (std::uint8_t i = 0; i < count; ++i) list.push_back(r.u16le());
      };
      read_list(b.asym);
      read_list(b.hash);
      read_list(b.dhe);
      read_list(b.aead);
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::Algorithms: {
      AlgorithmsBody b;
      b.asym = r.u16le();
      b.hash = r.u16le();
      b.dhe = r.u16le();
      b.aead = r.u16le();
      return finish_decode(msg, r, b);
    }
    case MessageKind::GetDigests:
      return finish_decode(msg, r, GetDigestsBody{});
    case MessageKind::Digests: {
      DigestsBody b;
      std::uint8_t count = r.u8();
      for (std::uint8_t i = 0; i < count; ++i) b.digests.push_back(r.blob8());
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::GetCertificate: {
      GetCertificateBody b;
      b.slot = r.u8();
      return finish_decode(msg, r, b);
    }
    case MessageKind::CertificateRsp: {
      CertificateRspBody b;
      b.slot = r.u8();
      b.chain_blob = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::Challenge: {
      ChallengeBody b;
      b.nonce = r.blob8();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::ChallengeAuth: {
      ChallengeAuthBody b;
      b.cert_chain_digest = r.blob8();
      b.nonce = r.blob8();
      b.transcript_hash = r.blob8();
      b.signature = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::GetMeasurements: {
      GetMeasurementsBody b;
      b.index = r.u8();
      b.nonce = r.blob8();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::Measurements: {
      MeasurementsBody b;
      std::uint8_t count = r.u8();
      for (std::uint8_t i = 0; i < count; ++i) {
        MeasurementBlock block;
        block.index = r.u8();
        block.type = static_cast<MeasurementType>(r.u8());
        block.value = r.blob16();
        b.blocks.push_back(std::move(block));
      }
      b.nonce = r.blob8();
      b.signature = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::KeyExchange: {
      KeyExchangeBody b;
      b.req_session_id = r.u16le();
      b.nonce = r.blob8();
      b.exchange_data = r.blob16();
      b.mutual_auth_requested = r.u8() != 0;
      b.requester_chain_blob = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::KeyExchangeRsp: {
      KeyExchangeRspBody b;
      b.rsp_session_id = r.u16le();
      b.nonce = r.blob8();
      b.exchange_data = r.blob16();
      b.signature = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::Finish: {
      FinishBody b;
      b.mutual_auth = r.u8() != 0;
      b.signature = r.blob16();
      b.confirm = r.blob8();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::FinishRsp: {
      FinishRspBody b;
      b.confirm = r.blob8();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::EncapsulatedResponse: {
      EncapsulatedResponseBody b;
      b.seq = r.u8();
      b.inner = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::EncapsulatedRequest: {
      EncapsulatedRequestBody b;
      b.seq = r.u8();
      b.done = r.u8() != 0;
      b.spdm_status = r.u32le();
      b.inner = r.blob16();
      return finish_decode(msg, r, std::move(b));
    }
    case MessageKind::ErrorRsp: {
      ErrorBody b;
      b.code = r.u32le();
      return finish_decode(msg, r, b);
    }
  }
  return Result<SpdmMessage>::failure(status::kMalformedMessage, "unknown message kind");
}

}  // namespace spdmboot
