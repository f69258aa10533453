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

#include "spdmboot/certs.hpp"

#include <limits>

namespace spdmboot {

Bytes Certificate::tbs_bytes() const {
  ByteWriter w;
  w.u8(version);
  w.blob8(to_bytes(subject));
  w.blob8(to_bytes(issuer));
  w.u64le(not_before);
  w.u64le(not_after);
  w.blob16(public_key);
  return w.take();
}

Bytes Certificate::encode() const {
  ByteWriter body;
  body.raw(tbs_bytes());
  body.blob16(signature);
  ByteWriter w;
  w.blob16(body.data());
  return w.take();
}

Result<Certificate> Certificate::decode(ByteSpan data) {
  ByteReader outer(data);
  Bytes body = outer.blob16();
  if (!outer.done()) {
    return Result<Certificate>::failure(status::kMalformedMessage, "bad certificate framing");
  }
  ByteReader r(body);
  Certificate c;
  c.version = r.u8();
  Bytes subject = r.blob8();
  Bytes issuer = r.blob8();
  c.not_before = r.u64le();
  c.not_after = r.u64le();
  c.public_key = r.blob16();
  c.signature = r.blob16();
  if (!r.done()) {
    return Result<Certificate>::failure(status::kMalformedMessage, "truncated certificate");
  }
  c.subject.assign(subject.begin(), subject.end());
  c.issuer.assign(issuer.begin(), issuer.end());
  return c;
}

Result<Certificate> make_certificate(const std::string& subject, const std::string& issuer,
                                     ByteSpan subject_public_key, ByteSpan issuer_private_key,
                                     std::uint64_t not_before, std::uint64_t not_after) {
  Certificate c;
  c.subject = subject;
  c.issuer = issuer;
  c.not_before = not_before;
  c.not_after = not_after;
  c.public_key.assign(subject_public_key.begin(), subject_public_key.end());
  auto sig = rsa_sign(c.tbs_bytes(), issuer_private_key);
  if (!sig.ok()) return sig.error();
  c.signature = sig.take();
  return c;
}

Result<Certificate> CertificateChain::root() const {
  if (certificates.empty()) {
    return Result<Certificate>::failure(status::kMissingInput, "empty chain");
  }
  return Certificate::decode(certificates.front());
}

Result<Certificate> CertificateChain::leaf() const {
  if (certificates.empty()) {
    return Result<Certificate>::failure(status::kMissingInput, "empty chain");
  }
  return Certificate::decode(certificates.back());
}

Result<CertificateChain> make_chain(const std::vector<Certificate>& certs) {
  if (certs.empty()) {
    return Result<CertificateChain>::failure(status::kMissingInput, "empty certificate list");
  }
  CertificateChain chain;
  for (const auto& c : certs) chain.certificates.push_back(c.encode());
  chain.root_hash = sha256(chain.certificates.front());
  return chain;
}

bool verify_chain(const CertificateChain& chain) {
  if (chain.certificates.empty()) return false;
  if (chain.root_hash != sha256(chain.certificates.front())) return false;
  Certificate prev;
  for (std::size_t i = 0; i < chain.certificates.size(); ++i) {
    auto cert = Certificate::decode(chain.certificates[i]);
    if (!cert.ok()) return false;
    const Bytes& signer_key = i == 0 ? cert.value().public_key : prev.public_key;
    if (!rsa_verify(cert.value().tbs_bytes(), cert.value().signature, signer_key)) return false;
    prev = cert.take();
  }
  return true;
}

Result<Bytes> build_cert_chain_blob(const CertificateChain& chain) {
  if (chain.certificates.empty()) {
    return Result<Bytes>::failure(status::kMissingInput, "empty chain");
  }
  std::size_t total = 4 + chain.root_hash.size();
  for (const auto& c : chain.certificates) total += c.size();
  if (total > std::numeric_limits<std::uint16_t>::max()) {
    return Result<Bytes>::failure(status::kOverflow, "chain exceeds 16-bit length");
  }
  ByteWriter w;
  w.u16le(static_cast<std::uint16_t>(total));
  w.u16le(0);
  w.raw(chain.root_hash);
  for (const auto& c : chain.certificates) w.raw(c);
  return w.take();
}

Result<CertificateChain> parse_cert_chain_blob(ByteSpan blob) {
  ByteReader r(blob);
  std::uint16_t total = r.u16le();
  r.skip(2);
  CertificateChain chain;
  chain.root_hash = r.raw(kSha256Size);
  if (!r.ok() || total != blob.size()) {
    return Result<CertificateChain>::failure(status::kMalformedMessage, "bad chain blob header");
  }
  while (r.remaining() > 0) {
    // Peek each certificate's length prefix to slice it out whole.
    std::size_t before = r.remaining();
    Bytes body = r.blob16();
    if (!r.ok()) {
      return Result<CertificateChain>::failure(status::kMalformedMessage,
                                               "truncated certificate in chain");
    }
    ByteWriter cert;
    cert.blob16(body);
    chain.certificates.push_back(cert.take());
    if (r.remaining() >= before) break;
  }
  if (chain.certificates.empty()) {
    return Result<CertificateChain>::failure(status::kMalformedMessage, "chain carries no certificates");
  }
  return chain;
}

Result<Bytes> chain_blob_leaf_key(ByteSpan blob) {
  auto chain = parse_cert_chain_blob(blob);
  if (!chain.ok()) return chain.error();
  auto leaf = chain.value().leaf();
  if (!leaf.ok()) return leaf.error();
  return leaf.value().public_key;
}

}  // namespace spdmboot
