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
#include "sha256_ref.hpp"
#include "spdmboot/crypto.hpp"
#include "spdmboot/rng.hpp"
#include "test_helpers.hpp"

using namespace spdmboot;

TEST_CASE("sha256 matches the published vectors") {
  CHECK(to_hex(sha256(to_bytes(""))) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(to_hex(sha256(to_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(sha256(to_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 agrees with the reference implementation on random input") {
  SeededRandom rng(21);
  for (int i = 0; i < 300; ++i) {
    Bytes data = rng.bytes(rng.next_u64() % 3000);
    CHECK(sha256(data) == sha256_ref::digest_vec(data));
  }
}

TEST_CASE("rsa2048 key generation is deterministic per seed") {
  SeededRandom a(5), b(5), c(6);
  KeyPair ka = rsa2048_generate(a);
  KeyPair kb = rsa2048_generate(b);
  KeyPair kc = rsa2048_generate(c);
  CHECK(ka.public_key == kb.public_key);
  CHECK(ka.private_key == kb.private_key);
  CHECK(ka.public_key != kc.public_key);
}

TEST_CASE("rsa sign and verify round trip; tampering breaks both paths") {
  const auto& ident = testing::fixture_identity("crypto-a");
  Bytes msg = to_bytes("the quick brown fox");
  auto sig = rsa_sign(msg, ident.key.private_key);
  REQUIRE(sig.ok());
  CHECK(sig.value().size() == kRsa2048Size);
  CHECK(rsa_verify(msg, sig.value(), ident.key.public_key));

  Bytes bad_sig = sig.value();
  bad_sig[0] ^= 0x01;
  CHECK_FALSE(rsa_verify(msg, bad_sig, ident.key.public_key));

  Bytes other = msg;
  other.push_back('!');
  CHECK_FALSE(rsa_verify(other, sig.value(), ident.key.public_key));

  const auto& wrong = testing::fixture_identity("crypto-b");
  CHECK_FALSE(rsa_verify(msg, sig.value(), wrong.key.public_key));
}

TEST_CASE("rsa handles malformed key blobs without crashing") {
  Bytes msg = to_bytes("x");
  CHECK_FALSE(rsa_sign(msg, Bytes{}).ok());
  CHECK_FALSE(rsa_sign(msg, Bytes{0x01, 0x02, 0x03}).ok());
  CHECK_FALSE(rsa_verify(msg, Bytes(256, 0), Bytes{0x01}));
}

TEST_CASE("signing with a corrupted private key never verifies") {
  const auto& ident = testing::fixture_identity("crypto-a");
  Bytes msg = to_bytes("finish payload");
  for (std::size_t pos : {std::size_t{8}, ident.key.private_key.size() / 2,
                          ident.key.private_key.size() - 1}) {
    Bytes bad_key = ident.key.private_key;
    bad_key[pos] ^= 0xff;
    auto sig = rsa_sign(msg, bad_key);
    if (sig.ok()) CHECK_FALSE(rsa_verify(msg, sig.value(), ident.key.public_key));
  }
}

TEST_CASE("dh produces a shared secret both sides agree on") {
  SeededRandom rng(31);
  DhKeyPair a = dh_generate(rng);
  DhKeyPair b = dh_generate(rng);
  CHECK(a.public_value.size() == 256);
  auto sa = dh_shared_secret(a.private_scalar, b.public_value);
  auto sb = dh_shared_secret(b.private_scalar, a.public_value);
  REQUIRE(sa.ok());
  REQUIRE(sb.ok());
  CHECK(sa.value() == sb.value());
  CHECK(sa.value().size() == 256);

  DhKeyPair c = dh_generate(rng);
  auto sc = dh_shared_secret(c.private_scalar, a.public_value);
  REQUIRE(sc.ok());
  CHECK(sc.value() != sa.value());
}

TEST_CASE("dh rejects out-of-range peer values") {
  SeededRandom rng(32);
  DhKeyPair a = dh_generate(rng);
  CHECK_FALSE(dh_shared_secret(a.private_scalar, Bytes(256, 0x00)).ok());
  CHECK_FALSE(dh_shared_secret(a.private_scalar, Bytes{}).ok());
}

TEST_CASE("crypto provider counts operations") {
  SeededRandom rng(33);
  CryptoProvider crypto(rng);
  const auto& ident = testing::fixture_identity("crypto-a");

  (void)crypto.sha256(to_bytes("a"));
  (void)crypto.sha256(to_bytes("b"));
  auto sig = crypto.sign(to_bytes("m"), ident.key.private_key);
  REQUIRE(sig.ok());
  CHECK(crypto.verify(to_bytes("m"), sig.value(), ident.key.public_key));

  CHECK(crypto.hash_ops() == 2);
  CHECK(crypto.sign_ops() == 1);
  CHECK(crypto.verify_ops() == 1);
  crypto.reset_counters();
  CHECK(crypto.hash_ops() == 0);
  CHECK(crypto.sign_ops() == 0);
  CHECK(crypto.verify_ops() == 0);
}

TEST_CASE("seeded random replays identically") {
  SeededRandom a(99), b(99);
  CHECK(a.bytes(64) == b.bytes(64));
  CHECK(a.next_u64() == b.next_u64());
}
