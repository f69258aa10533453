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

#include "spdmboot/crypto.hpp"

#include <gmp.h>
#include <openssl/evp.h>

#include <cstring>

namespace spdmboot {

Bytes sha256(ByteSpan data) {
  Bytes out(kSha256Size);
  unsigned int len = kSha256Size;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

Result<Bytes> hash_data(HashAlgorithm alg, ByteSpan data) {
  if (alg != HashAlgorithm::Sha256) {
    return Result<Bytes>::failure(status::kUnsupportedAlgorithm, "unsupported hash algorithm");
  }
  return sha256(data);
}

std::size_t digest_size(HashAlgorithm alg) {
  return alg == HashAlgorithm::Sha256 ? kSha256Size : 0;
}

namespace {

class Mpz {
 public:
  Mpz() { mpz_init(z_); }
  ~Mpz() { mpz_clear(z_); }
  Mpz(const Mpz& o) { mpz_init_set(z_, o.z_); }
  Mpz& operator=(const Mpz& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  mpz_ptr get() { return z_; }
  mpz_srcptr get() const { return z_; }

 private:
  mpz_t z_;
};

Mpz mpz_from_bytes(ByteSpan data) {
  Mpz v;
  if (!data.empty()) mpz_import(v.get(), data.size(), 1, 1, 1, 0, data.data());
  return v;
}

// Fixed-width big-endian export, left-padded with zeros. Returns empty when
// the value does not fit.
Bytes mpz_to_fixed(const Mpz& v, std::size_t width) {
  std::size_t bits = mpz_sizeinbase(v.get(), 2);
  std::size_t need = mpz_sgn(v.get()) == 0 ? 0 : (bits + 7) / 8;
  if (need > width) return {};
  Bytes out(width, 0);
  if (need > 0) {
    std::size_t count = 0;
    mpz_export(out.data() + (width - need), &count, 1, 1, 1, 0, v.get());
  }
  return out;
}

constexpr std::uint16_t kAlgRsa2048 = static_cast<std::uint16_t>(AsymAlgorithm::Rsa2048Sha256);

struct RsaPublic {
  Mpz n;
  Mpz e;
  std::size_t size = 0;
};

struct RsaPrivate {
  Mpz n;
  Mpz d;
  std::size_t size = 0;
};

bool parse_key(ByteSpan blob, Mpz& n, Mpz& x, std::size_t& size) {
  ByteReader r(blob);
  if (r.u16le() != kAlgRsa2048) return false;
  Bytes nb = r.blob16();
  Bytes xb = r.blob16();
  if (!r.done() || nb.empty() || xb.empty()) return false;
  n = mpz_from_bytes(nb);
  x = mpz_from_bytes(xb);
  size = nb.size();
  return mpz_sgn(n.get()) > 0 && mpz_sgn(x.get()) > 0;
}

Bytes encode_key(const Mpz& n, const Mpz& x, std::size_t n_width, std::size_t x_width) {
  ByteWriter w;
  w.u16le(kAlgRsa2048);
  w.blob16(mpz_to_fixed(n, n_width));
  w.blob16(mpz_to_fixed(x, x_width));
  return w.take();
}

// DigestInfo prefix for SHA-256 (PKCS#1 v1.5, RFC 8017 section 9.2 notes).
constexpr std::uint8_t kSha256DigestInfo[] = {0x30, 0x31, 0x30, 0x0d, 0x06, 0x09, 0x60,
                                              0x86, 0x48, 0x01, 0x65, 0x03, 0x04, 0x02,
                                              0x01, 0x05, 0x00, 0x04, 0x20};

Bytes build_emsa(ByteSpan digest, std::size_t k) {
  std::size_t t_len = sizeof(kSha256DigestInfo) + digest.size();
  if (k < t_len + 11) return {};
  Bytes em(k, 0xff);
  em[0] = 0x00;
  em[1] = 0x01;
  em[k - t_len - 1] = 0x00;
  std::memcpy(em.data() + k - t_len, kSha256DigestInfo, sizeof(kSha256DigestInfo));
  std::memcpy(em.data() + k - digest.size(), digest.data(), digest.size());
  return em;
}

Mpz prime_candidate_1024(RandomSource& rng) {
  Bytes cand = rng.bytes(128);
  // Top two bits forced so p*q reaches 2048 bits; low bit forced odd.
  cand[0] |= 0xc0;
  cand[127] |= 0x01;
  Mpz p = mpz_from_bytes(cand);
  mpz_nextprime(p.get(), p.get());
  return p;
}

// 2048-bit MODP group (RFC 3526, id 14), generator 2.
const char* kModp2048Hex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

const Mpz& modp2048() {
  static const Mpz p = [] {
    Mpz v;
    mpz_set_str(v.get(), kModp2048Hex, 16);
    return v;
  }();
  return p;
}

}  // namespace

KeyPair rsa2048_generate(RandomSource& rng) {
  Mpz e;
  mpz_set_ui(e.get(), 65537);
  for (;;) {
    Mpz p = prime_candidate_1024(rng);
    Mpz q = prime_candidate_1024(rng);
    if (mpz_cmp(p.get(), q.get()) == 0) continue;
    Mpz n;
    mpz_mul(n.get(), p.get(), q.get());
    if (mpz_sizeinbase(n.get(), 2) != 2048) continue;
    Mpz p1 = p;
    mpz_sub_ui(p1.get(), p1.get(), 1);
    Mpz q1 = q;
    mpz_sub_ui(q1.get(), q1.get(), 1);
    Mpz phi;
    mpz_mul(phi.get(), p1.get(), q1.get());
    Mpz g;
    mpz_gcd(g.get(), e.get(), phi.get());
    if (mpz_cmp_ui(g.get(), 1) != 0) continue;
    Mpz d;
    if (mpz_invert(d.get(), e.get(), phi.get()) == 0) continue;
    KeyPair kp;
    kp.public_key = encode_key(n, e, kRsa2048Size, 3);
    kp.private_key = encode_key(n, d, kRsa2048Size, kRsa2048Size);
    return kp;
  }
}

Result<Bytes> rsa_sign(ByteSpan data, ByteSpan private_key) {
  Mpz n, d;
  std::size_t k = 0;
  if (!parse_key(private_key, n, d, k)) {
    return Result<Bytes>::failure(status::kMalformedMessage, "malformed private key");
  }
  Bytes em = build_emsa(sha256(data), k);
  if (em.empty()) {
    return Result<Bytes>::failure(status::kOverflow, "modulus too small for digest");
  }
  Mpz m = mpz_from_bytes(em);
  Mpz s;
  mpz_powm(s.get(), m.get(), d.get(), n.get());
  return mpz_to_fixed(s, k);
}

bool rsa_verify(ByteSpan data, ByteSpan signature, ByteSpan public_key) {
  Mpz n, e;
  std::size_t k = 0;
  if (!parse_key(public_key, n, e, k)) return false;
  if (signature.size() != k) return false;
  Mpz s = mpz_from_bytes(signature);
  if (mpz_cmp(s.get(), n.get()) >= 0) return false;
  Mpz m;
  mpz_powm(m.get(), s.get(), e.get(), n.get());
  Bytes em = mpz_to_fixed(m, k);
  Bytes expected = build_emsa(sha256(data), k);
  return !em.empty() && !expected.empty() && em == expected;
}

DhKeyPair dh_generate(RandomSource& rng) {
  DhKeyPair kp;
  kp.private_scalar = rng.bytes(32);
  bool all_zero = true;
  for (auto b : kp.private_scalar) all_zero = all_zero && b == 0;
  if (all_zero) kp.private_scalar.back() = 1;
  Mpz x = mpz_from_bytes(kp.private_scalar);
  Mpz g;
  mpz_set_ui(g.get(), 2);
  Mpz y;
  mpz_powm(y.get(), g.get(), x.get(), modp2048().get());
  kp.public_value = mpz_to_fixed(y, kRsa2048Size);
  return kp;
}

Result<Bytes> dh_shared_secret(ByteSpan private_scalar, ByteSpan peer_public) {
  if (peer_public.size() != kRsa2048Size) {
    return Result<Bytes>::failure(status::kMalformedMessage, "bad peer public size");
  }
  Mpz peer = mpz_from_bytes(peer_public);
  const Mpz& p = modp2048();
  Mpz pm1 = p;
  mpz_sub_ui(pm1.get(), pm1.get(), 1);
  if (mpz_cmp_ui(peer.get(), 1) <= 0 || mpz_cmp(peer.get(), pm1.get()) >= 0) {
    return Result<Bytes>::failure(status::kMalformedMessage, "peer public out of range");
  }
  Mpz x = mpz_from_bytes(private_scalar);
  if (mpz_sgn(x.get()) <= 0) {
    return Result<Bytes>::failure(status::kMalformedMessage, "bad private scalar");
  }
  Mpz s;
  mpz_powm(s.get(), peer.get(), x.get(), p.get());
  return mpz_to_fixed(s, kRsa2048Size);
}

Bytes CryptoProvider::sha256(ByteSpan data) {
  ++hash_ops_;
  return spdmboot::sha256(data);
}

Result<Bytes> CryptoProvider::hash(HashAlgorithm alg, ByteSpan data) {
  ++hash_ops_;
  return hash_data(alg, data);
}

Result<Bytes> CryptoProvider::sign(ByteSpan data, ByteSpan private_key) {
  ++sign_ops_;
  return rsa_sign(data, private_key);
}

bool CryptoProvider::verify(ByteSpan data, ByteSpan signature, ByteSpan public_key) {
  ++verify_ops_;
  return rsa_verify(data, signature, public_key);
}

DhKeyPair CryptoProvider::dh_generate() { return spdmboot::dh_generate(rng_); }

Result<Bytes> CryptoProvider::dh_shared_secret(ByteSpan private_scalar, ByteSpan peer_public) {
  return spdmboot::dh_shared_secret(private_scalar, peer_public);
}

void CryptoProvider::reset_counters() {
  hash_ops_ = 0;
  sign_ops_ = 0;
  verify_ops_ = 0;
}

}  // namespace spdmboot
