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

#include "spdmboot/certs.hpp"
#include "spdmboot/crypto.hpp"
#include "spdmboot/rng.hpp"

namespace spdmboot {

struct IdentityConfig {
  std::string platform_name = "vplat";
  // Validity bounds are carried opaquely; fixed values keep provisioning
  // deterministic.
  std::uint64_t not_before = 1767225600;  // 2026-01-01T00:00:00Z
  std::uint64_t not_after = 2082758400;   // 2036-01-01T00:00:00Z
};

// Secure-boot anchors plus the signed boot-code digest:
//   1. self-signed platform key (PK) acting as the root CA
//   2. allowed-signer database (db) of fixed-width digests
//   3. key-exchange key (KEK) issued under the PK
//   4. digest of the boot code section
//   5. PK signature over that digest
struct PlatformAnchors {
  TrustAnchorSet anchors;
  SignedDigest hcrtm;
  KeyPair pk_key;
  KeyPair kek_key;
};

Result<PlatformAnchors> generate_platform_anchors(const IdentityConfig& config,
                                                  ByteSpan code_section, RandomSource& rng);

// SPDM endpoint identity: a signing key and the certificate chain presented
// over GET_CERTIFICATE (single self-signed certificate by default).
struct EndpointIdentity {
  KeyPair key;
  CertificateChain chain;
  Bytes chain_blob;
};

Result<EndpointIdentity> generate_endpoint_identity(const std::string& subject,
                                                    const IdentityConfig& config,
                                                    RandomSource& rng);

}  // namespace spdmboot
