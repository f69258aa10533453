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

#include "spdmboot/bytes.hpp"
#include "spdmboot/result.hpp"
#include "spdmboot/rng.hpp"

namespace spdmboot {

enum class HashAlgorithm : std::uint16_t { Sha256 = 1 };
enum class AsymAlgorithm : std::uint16_t { Rsa2048Sha256 = 1 };

inline constexpr std::size_t kSha256Size = 32;
inline constexpr std::size_t kRsa2048Size = 256;

Bytes sha256(ByteSpan data);
Result<Bytes> hash_data(HashAlgorithm alg, ByteSpan data);
std::size_t digest_size(HashAlgorithm alg);

// Key blobs are self-describing: alg(u16 LE), then u16-length-prefixed
// big-endian integers (n, e for public; n, d for private).
struct KeyPair {
  Bytes public_key;
  Bytes private_key;
};

// Deterministic for a given RandomSource state: prime candidates are drawn
// from the source and advanced to the next prime. e is fixed at 65537.
KeyPair rsa2048_generate(RandomSource& rng);

// PKCS#1 v1.5 signature over sha256(data). Fails on malformed keys.
Result<Bytes> rsa_sign(ByteSpan data, ByteSpan private_key);
// Never throws; any malformed input verifies false.
bool rsa_verify(ByteSpan data, ByteSpan signature, ByteSpan public_key);

// Finite-field DH over the RFC 3526 2048-bit MODP group, generator 2.
// Public values and shared secrets are fixed-width 256-byte big-endian.
struct DhKeyPair {
  Bytes private_scalar;
  Bytes public_value;
};
DhKeyPair dh_generate(RandomSource& rng);
Result<Bytes> dh_shared_secret(ByteSpan private_scalar, ByteSpan peer_public);

// Counting wrapper used by the boot flow so per-run crypto work is
// observable. One provider instance per boot; endpoints share it.
class CryptoProvider {
 public:
  explicit CryptoProvider(RandomSource& rng) : rng_(rng) {}

  Bytes sha256(ByteSpan data);
  Result<Bytes> hash(HashAlgorithm alg, ByteSpan data);
  Result<Bytes> sign(ByteSpan data, ByteSpan private_key);
  bool verify(ByteSpan data, ByteSpan signature, ByteSpan public_key);
  DhKeyPair dh_generate();
  Result<Bytes> dh_shared_secret(ByteSpan private_scalar, ByteSpan peer_public);

  RandomSource& rng() { return rng_; }
  std::uint64_t hash_ops() const { return hash_ops_; }
  std::uint64_t sign_ops() const { return sign_ops_; }
  std::uint64_t verify_ops() const { return verify_ops_; }
  void reset_counters();

 private:
  RandomSource& rng_;
  std::uint64_t hash_ops_ = 0;
  std::uint64_t sign_ops_ = 0;
  std::uint64_t verify_ops_ = 0;
};

}  // namespace spdmboot
