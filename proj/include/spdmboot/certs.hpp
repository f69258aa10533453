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

#include <cstdint>
#include <string>
#include <vector>

#include "spdmboot/bytes.hpp"
#include "spdmboot/crypto.hpp"
#include "spdmboot/result.hpp"

namespace spdmboot {

// Compact certificate format: a u16 length prefix followed by version,
// length-prefixed subject and issuer, validity bounds (carried opaquely, the
// simulation has no clock), the subject public key blob, and the issuer
// signature over the to-be-signed region.
struct Certificate {
  std::uint8_t version = 1;
  std::string subject;
  std::string issuer;
  std::uint64_t not_before = 0;
  std::uint64_t not_after = 0;
  Bytes public_key;
  Bytes signature;

  Bytes tbs_bytes() const;
  Bytes encode() const;
  static Result<Certificate> decode(ByteSpan data);

  bool operator==(const Certificate&) const = default;
};

Result<Certificate> make_certificate(const std::string& subject, const std::string& issuer,
                                     ByteSpan subject_public_key, ByteSpan issuer_private_key,
                                     std::uint64_t not_before, std::uint64_t not_after);

// Root first, leaf last. Certificates are kept in encoded form; root_hash is
// the digest of the encoded root certificate.
struct CertificateChain {
  Bytes root_hash;
  std::vector<Bytes> certificates;

  Result<Certificate> root() const;
  Result<Certificate> leaf() const;
  bool operator==(const CertificateChain&) const = default;
};

Result<CertificateChain> make_chain(const std::vector<Certificate>& certs);

// Per-link check: root is self-signed, every later certificate's signature
// verifies against its predecessor's key, and root_hash matches.
bool verify_chain(const CertificateChain& chain);

// Wire blob: total_length (u16 LE, counts the whole blob including this
// field), 2 reserved zero bytes, root_hash, then the encoded certificates.
Result<Bytes> build_cert_chain_blob(const CertificateChain& chain);
Result<CertificateChain> parse_cert_chain_blob(ByteSpan blob);

// Leaf public key straight from a wire blob; convenience for verifiers that
// hold the expected blob rather than a parsed chain.
Result<Bytes> chain_blob_leaf_key(ByteSpan blob);

struct TrustAnchorSet {
  CertificateChain pk;
  CertificateChain kek;
  std::vector<Bytes> db;  // fixed-width digests of allowed signers
};

struct SignedDigest {
  Bytes digest;
  Bytes signature;
  std::string signer;  // subject of the signing certificate
};

}  // namespace spdmboot
