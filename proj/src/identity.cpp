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

#include "spdmboot/identity.hpp"

namespace spdmboot {

Result<PlatformAnchors> generate_platform_anchors(const IdentityConfig& config,
                                                  ByteSpan code_section, RandomSource& rng) {
  if (code_section.empty()) {
    return Result<PlatformAnchors>::failure(status::kMissingInput, "empty code section");
  }
  PlatformAnchors out;
  out.pk_key = rsa2048_generate(rng);
  out.kek_key = rsa2048_generate(rng);

  const std::string pk_subject = config.platform_name + "-pk";
  const std::string kek_subject = config.platform_name + "-kek";

  auto pk_cert = make_certificate(pk_subject, pk_subject, out.pk_key.public_key,
                                  out.pk_key.private_key, config.not_before, config.not_after);
  if (!pk_cert.ok()) return pk_cert.error();
  auto kek_cert = make_certificate(kek_subject, pk_subject, out.kek_key.public_key,
                                   out.pk_key.private_key, config.not_before, config.not_after);
  if (!kek_cert.ok()) return kek_cert.error();

  auto pk_chain = make_chain({pk_cert.value()});
  if (!pk_chain.ok()) return pk_chain.error();
  auto kek_chain = make_chain({pk_cert.value(), kek_cert.value()});
  if (!kek_chain.ok()) return kek_chain.error();
  out.anchors.pk = pk_chain.take();
  out.anchors.kek = kek_chain.take();
  // db lists the digests of certificates whose signatures the platform
  // accepts; the KEK and PK certificates seed it.
  out.anchors.db.push_back(sha256(out.anchors.kek.certificates.back()));
  out.anchors.db.push_back(sha256(out.anchors.pk.certificates.front()));

  out.hcrtm.digest = sha256(code_section);
  auto sig = rsa_sign(out.hcrtm.digest, out.pk_key.private_key);
  if (!sig.ok()) return sig.error();
  out.hcrtm.signature = sig.take();
  out.hcrtm.signer = pk_subject;
  return out;
}

Result<EndpointIdentity> generate_endpoint_identity(const std::string& subject,
                                                    const IdentityConfig& config,
                                                    RandomSource& rng) {
  EndpointIdentity id;
  id.key = rsa2048_generate(rng);
  auto cert = make_certificate(subject, subject, id.key.public_key, id.key.private_key,
                               config.not_before, config.not_after);
  if (!cert.ok()) return cert.error();
  auto chain = make_chain({cert.value()});
  if (!chain.ok()) return chain.error();
  id.chain = chain.take();
  auto blob = build_cert_chain_blob(id.chain);
  if (!blob.ok()) return blob.error();
  id.chain_blob = blob.take();
  return id;
}

}  // namespace spdmboot
