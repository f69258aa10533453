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
#include <cstdint>
#include <variant>
#include <vector>

#include "spdmboot/bytes.hpp"
#include "spdmboot/result.hpp"

namespace spdmboot {

// Kind codes keep the direction bit convention: bit 7 set on requests.
enum class MessageKind : std::uint8_t {
  Digests = 0x01,
  CertificateRsp = 0x02,
  ChallengeAuth = 0x03,
  Version = 0x04,
  Measurements = 0x60,
  Capabilities = 0x61,
  Algorithms = 0x63,
  KeyExchangeRsp = 0x64,
  FinishRsp = 0x65,
  EncapsulatedRequest = 0x6b,
  ErrorRsp = 0x7f,
  GetDigests = 0x81,
  GetCertificate = 0x82,
  Challenge = 0x83,
  GetVersion = 0x84,
  GetMeasurements = 0xe0,
  GetCapabilities = 0xe1,
  NegotiateAlgorithms = 0xe3,
  KeyExchange = 0xe4,
  Finish = 0xe5,
  EncapsulatedResponse = 0xeb,
};

constexpr bool is_request(MessageKind k) {
  return (static_cast<std::uint8_t>(k) & 0x80) != 0;
}
const char* to_string(MessageKind k);

struct SpdmVersion {
  std::uint8_t major = 1;
  std::uint8_t minor = 3;
  auto operator<=>(const SpdmVersion&) const = default;
};

// Capability flag bits exchanged in GET_CAPABILITIES/CAPABILITIES.
namespace cap {
inline constexpr std::uint32_t kCert = 0x01;
inline constexpr std::uint32_t kChallenge = 0x02;
inline constexpr std::uint32_t kMeasure = 0x04;
inline constexpr std::uint32_t kKeyExchange = 0x08;
inline constexpr std::uint32_t kMutualAuth = 0x10;
inline constexpr std::uint32_t kEncapsulated = 0x20;
}  // namespace cap

// Algorithm registry ids carried in NEGOTIATE_ALGORITHMS.
namespace alg {
inline constexpr std::uint16_t kAsymRsa2048Sha256 = 0x0001;
inline constexpr std::uint16_t kHashSha256 = 0x0001;
inline constexpr std::uint16_t kDheFfdhe2048 = 0x0001;
inline constexpr std::uint16_t kAeadAes128Gcm = 0x0001;
}  // namespace alg

enum class MeasurementType : std::uint8_t {
  FirmwareHash = 1,
  ConfigHash = 2,
};

struct MeasurementBlock {
  std::uint8_t index = 0;
  MeasurementType type = MeasurementType::FirmwareHash;
  Bytes value;
  bool operator==(const MeasurementBlock&) const = default;
};

inline constexpr std::uint8_t kAllMeasurementIndices = 0xff;

struct GetVersionBody {
  bool operator==(const GetVersionBody&) const = default;
};
struct VersionBody {
  std::vector<SpdmVersion> versions;
  bool operator==(const VersionBody&) const = default;
};
struct GetCapabilitiesBody {
  std::uint32_t flags = 0;
  bool operator==(const GetCapabilitiesBody&) const = default;
};
struct CapabilitiesBody {
  std::uint32_t flags = 0;
  bool operator==(const CapabilitiesBody&) const = default;
};
struct NegotiateAlgorithmsBody {
  std::vector<std::uint16_t> asym;
  std::vector<std::uint16_t> hash;
  std::vector<std::uint16_t> dhe;
  std::vector<std::uint16_t> aead;
  bool operator==(const NegotiateAlgorithmsBody&) const = default;
};
struct AlgorithmsBody {
  std::uint16_t asym = 0;
  std::uint16_t hash = 0;
  std::uint16_t dhe = 0;
  std::uint16_t aead = 0;
  bool operator==(const AlgorithmsBody&) const = default;
};
struct GetDigestsBody {
  bool operator==(const GetDigestsBody&) const = default;
};
struct DigestsBody {
  std::vector<Bytes> digests;
  bool operator==(const DigestsBody&) const = default;
};
struct GetCertificateBody {
  std::uint8_t slot = 0;
  bool operator==(const GetCertificateBody&) const = default;
};
struct CertificateRspBody {
  std::uint8_t slot = 0;
  Bytes chain_blob;
  bool operator==(const CertificateRspBody&) const = default;
};
struct ChallengeBody {
  Bytes nonce;
  bool operator==(const ChallengeBody&) const = default;
};
// transcript_hash and signature cover the running request/response
// transcript; the message enters transcripts with signature emptied.
struct ChallengeAuthBody {
  Bytes cert_chain_digest;
  Bytes nonce;
  Bytes transcript_hash;
  Bytes signature;
  bool operator==(const ChallengeAuthBody&) const = default;
};
struct GetMeasurementsBody {
  std::uint8_t index = kAllMeasurementIndices;
  Bytes nonce;
  bool operator==(const GetMeasurementsBody&) const = default;
};
struct MeasurementsBody {
  std::vector<MeasurementBlock> blocks;
  Bytes nonce;
  Bytes signature;
  bool operator==(const MeasurementsBody&) const = default;
};
struct KeyExchangeBody {
  std::uint16_t req_session_id = 0;
  Bytes nonce;
  Bytes exchange_data;
  bool mutual_auth_requested = false;
  Bytes requester_chain_blob;  // present when mutual auth is requested
  bool operator==(const KeyExchangeBody&) const = default;
};
struct KeyExchangeRspBody {
  std::uint16_t rsp_session_id = 0;
  Bytes nonce;
  Bytes exchange_data;
  Bytes signature;
  bool operator==(const KeyExchangeRspBody&) const = default;
};
struct FinishBody {
  bool mutual_auth = false;
  Bytes signature;  // requester signature when mutual auth is in effect
  Bytes confirm;    // keyed check value derived from the handshake secret
  bool operator==(const FinishBody&) const = default;
};
struct FinishRspBody {
  Bytes confirm;
  bool operator==(const FinishRspBody&) const = default;
};
struct EncapsulatedResponseBody {
  std::uint8_t seq = 0;
  Bytes inner;  // encoded response to the previous encapsulated request
  bool operator==(const EncapsulatedResponseBody&) const = default;
};
struct EncapsulatedRequestBody {
  std::uint8_t seq = 0;
  bool done = false;
  std::uint32_t spdm_status = 0;
  Bytes inner;  // encoded request for the requester to answer
  bool operator==(const EncapsulatedRequestBody&) const = default;
};
struct ErrorBody {
  std::uint32_t code = 0;
  bool operator==(const ErrorBody&) const = default;
};

using MessageBody =
    std::variant<GetVersionBody, VersionBody, GetCapabilitiesBody, CapabilitiesBody,
                 NegotiateAlgorithmsBody, AlgorithmsBody, GetDigestsBody, DigestsBody,
                 GetCertificateBody, CertificateRspBody, ChallengeBody, ChallengeAuthBody,
                 GetMeasurementsBody, MeasurementsBody, KeyExchangeBody, KeyExchangeRspBody,
                 FinishBody, FinishRspBody, EncapsulatedResponseBody, EncapsulatedRequestBody,
                 ErrorBody>;

// Header: version major, version minor, kind, params (2 reserved bytes).
struct SpdmMessage {
  SpdmVersion version{};
  MessageKind kind = MessageKind::GetVersion;
  std::array<std::uint8_t, 2> params{};
  MessageBody body;

  bool operator==(const SpdmMessage&) const = default;
};

template <typename Body>
SpdmMessage make_message(SpdmVersion version, MessageKind kind, Body body) {
  SpdmMessage m;
  m.version = version;
  m.kind = kind;
  m.body = std::move(body);
  return m;
}

Bytes encode_message(const SpdmMessage& msg);
Result<SpdmMessage> decode_message(ByteSpan data);

}  // namespace spdmboot
