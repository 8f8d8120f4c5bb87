/*
Copyright 2026 the svcrypt authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <doctest.h>

#include <map>

#include "support.hpp"
#include "svcrypt/keys.hpp"

using namespace svcrypt;

namespace {

std::array<std::uint8_t, 16> seed_from(std::uint64_t n) {
    std::array<std::uint8_t, 16> s{};
    for (int i = 0; i < 8; ++i)
        s[15 - i] = static_cast<std::uint8_t>(n >> (8 * i));
    return s;
}

} // namespace

TEST_CASE("AES known-answer vectors (FIPS-197 appendix C)") {
    const Bytes key128 = from_hex("000102030405060708090a0b0c0d0e0f");
    const Bytes key192 = from_hex("000102030405060708090a0b0c0d0e0f1011121314151617");
    const Bytes key256 =
        from_hex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    std::array<std::uint8_t, 16> pt{};
    const Bytes pt_bytes = from_hex("00112233445566778899aabbccddeeff");
    std::copy(pt_bytes.begin(), pt_bytes.end(), pt.begin());

    auto hex_of = [](const std::array<std::uint8_t, 16>& b) {
        return to_hex(ByteView(b.data(), b.size()));
    };
    CHECK(hex_of(aes_encrypt_block(key128, pt)) == "69c4e0d86a7b0430d8cdb78070b4c55a");
    CHECK(hex_of(aes_encrypt_block(key192, pt)) == "dda97ca4864cdfe06eaf70a0ec0d7191");
    CHECK(hex_of(aes_encrypt_block(key256, pt)) == "8ea2b7ca516745bfeafc49904b496089");
}

TEST_CASE("keyed_stream block 0 equals one AES encryption of the counter block") {
    const auto seed = seed_from(0x1234);
    const Bytes tag = make_tag("frame");
    const Bytes stream = keyed_stream(seed, tag, 16);

    std::array<std::uint8_t, 16> counter0{};
    std::copy(tag.begin(), tag.end(), counter0.begin());
    const auto expect = aes_encrypt_block(ByteView(seed.data(), seed.size()), counter0);
    CHECK(Bytes(expect.begin(), expect.end()) == stream);
}

TEST_CASE("keyed_stream basics") {
    const auto seed = seed_from(1);
    CHECK(keyed_stream(seed, make_tag("x"), 0).empty());
    const Bytes a = keyed_stream(seed, make_tag("x"), 1000);
    const Bytes b = keyed_stream(seed, make_tag("x"), 1000);
    CHECK(a == b);
    // prefix stability
    const Bytes shorter = keyed_stream(seed, make_tag("x"), 100);
    CHECK(Bytes(a.begin(), a.begin() + 100) == shorter);
    // different tags diverge
    CHECK(keyed_stream(seed, make_tag("y"), 1000) != a);
    CHECK_THROWS_AS(keyed_stream(seed, Bytes(13, 0), 16), UsageError);
}

TEST_CASE("derive_permutation matches the standalone sampling oracle") {
    SUBCASE("the spec'd fixed point: seed 0x...01, tag 'frame', n=8") {
        std::array<std::uint8_t, 16> seed{};
        seed[15] = 1;
        const Permutation p = derive_permutation(seed, make_tag("frame"), 8);
        const auto expect = testsup::fisher_yates_oracle(seed.data(), "frame", 8);
        CHECK(p.map == expect);
    }
    SUBCASE("100 fixed seeds, assorted sizes") {
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto seed = seed_from(s * 7919 + 3);
            const std::size_t n = 1 + static_cast<std::size_t>(s % 40);
            const Permutation p = derive_permutation(seed, make_tag("frame"), n);
            CHECK(p.map == testsup::fisher_yates_oracle(seed.data(), "frame", n));
        }
    }
}

TEST_CASE("permutations are bijections and invert cleanly") {
    auto g = testsup::rng(31);
    SUBCASE("n=1 is the identity") {
        const Permutation p = derive_permutation(seed_from(9), make_tag("t"), 1);
        CHECK(p.map == std::vector<std::uint32_t>{0});
    }
    SUBCASE("n=0 is rejected") {
        CHECK_THROWS_WITH_AS(derive_permutation(seed_from(9), make_tag("t"), 0),
                             "empty domain", UsageError);
    }
    SUBCASE("invert(p) composed with p is the identity") {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + g() % 200;
            const Permutation p = derive_permutation(seed_from(g()), make_tag("t"), n);
            const Permutation inv = invert_permutation(p);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(inv[p[i]] == i);
            CHECK(invert_permutation(inv) == p);
        }
    }
    SUBCASE("hand-checked inverse") {
        Permutation p;
        p.map = {2, 0, 1};
        CHECK(invert_permutation(p).map == std::vector<std::uint32_t>{1, 2, 0});
        Permutation id;
        id.map = {0, 1, 2, 3};
        CHECK(invert_permutation(id) == id);
    }
}

TEST_CASE("uniformity: chi-square over the 24 permutations of n=4") {
    // 24000 deterministic seeds; p > 0.001 for 23 dof means chi2 < 49.728
    std::map<std::vector<std::uint32_t>, int> counts;
    const int trials = 24000;
    for (int t = 0; t < trials; ++t)
        counts[derive_permutation(seed_from(0xABCD0000ull + t), make_tag("u"), 4).map] += 1;
    CHECK(counts.size() == 24);
    const double expected = trials / 24.0;
    double chi2 = 0;
    for (const auto& [perm, count] : counts)
        chi2 += (count - expected) * (count - expected) / expected;
    CHECK(chi2 < 49.728);
}

TEST_CASE("domain separation: 'frame' and 'block' tags disagree") {
    int differ = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const auto seed = seed_from(0x5EED0000ull + t);
        if (derive_permutation(seed, make_tag("frame"), 8) !=
            derive_permutation(seed, make_tag("block"), 8))
            ++differ;
    }
    CHECK(differ >= 990);
}

TEST_CASE("shuffle key wrap and unwrap") {
    const MasterKey master = MasterKey::from_hex("00112233445566778899aabbccddeeff");
    const ShuffleKey sk = ShuffleKey::generate();

    SUBCASE("round trip") {
        const Bytes blob = wrap_shuffle_key(master, sk);
        CHECK(blob.size() == 72);
        CHECK(unwrap_shuffle_key(master, blob) == sk);
    }
    SUBCASE("wrong master key authenticates nothing") {
        const Bytes blob = wrap_shuffle_key(master, sk);
        const MasterKey other = MasterKey::from_hex("00112233445566778899aabbccddeefe");
        CHECK_THROWS_WITH_AS(unwrap_shuffle_key(other, blob), "wrong key or corrupted blob",
                             KeyError);
    }
    SUBCASE("every single-bit corruption is caught") {
        const Bytes blob = wrap_shuffle_key(master, sk);
        auto g = testsup::rng(33);
        for (int trial = 0; trial < 100; ++trial) {
            Bytes bad = blob;
            const std::size_t bit = g() % (8 * bad.size());
            bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            CHECK_THROWS_AS(unwrap_shuffle_key(master, bad), KeyError);
        }
    }
    SUBCASE("fresh nonces: wrapping twice differs") {
        CHECK(wrap_shuffle_key(master, sk) != wrap_shuffle_key(master, sk));
    }
}

TEST_CASE("shuffle key serialization layout") {
    ShuffleKey sk;
    for (int i = 0; i < 16; ++i)
        sk.frame_seed[i] = static_cast<std::uint8_t>(i);
    for (int i = 0; i < 16; ++i)
        sk.block_seed[i] = static_cast<std::uint8_t>(0x40 + i);
    for (int i = 0; i < 12; ++i)
        sk.stream_nonce[i] = static_cast<std::uint8_t>(0x80 + i);
    const Bytes wire = sk.serialize();
    REQUIRE(wire.size() == 44);
    CHECK(wire[0] == 0);
    CHECK(wire[16] == 0x40);
    CHECK(wire[32] == 0x80);
    CHECK(ShuffleKey::deserialize(wire) == sk);
}

TEST_CASE("master key material validation") {
    CHECK(MasterKey::from_hex("00112233445566778899aabbccddeeff").bytes.size() == 16);
    CHECK(MasterKey::from_hex("000102030405060708090a0b0c0d0e0f1011121314151617").bytes.size() ==
          24);
    CHECK_THROWS_AS(MasterKey::from_hex("0011"), KeyError);
    CHECK_THROWS_AS(MasterKey::from_hex("zz112233445566778899aabbccddeeff"), UsageError);
}
