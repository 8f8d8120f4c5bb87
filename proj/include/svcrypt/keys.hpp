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

#pragma once

#include <array>
#include <cstdint>

#include "svcrypt/common.hpp"

namespace svcrypt {

/// AES key material, 16, 24 or 32 bytes.
struct MasterKey {
    Bytes bytes;

    static MasterKey from_hex(std::string_view hex); // 32, 48 or 64 hex digits
    static MasterKey random(std::size_t len = 16);
};

/// The secret that travels with an encrypted file, wrapped under the master
/// key. Serialized as frame_seed || block_seed || stream_nonce (44 bytes).
struct ShuffleKey {
    std::array<std::uint8_t, 16> frame_seed{};
    std::array<std::uint8_t, 16> block_seed{};
    std::array<std::uint8_t, 12> stream_nonce{};

    static ShuffleKey generate(); // from OS randomness
    Bytes serialize() const;
    static ShuffleKey deserialize(ByteView data);

    bool operator==(const ShuffleKey&) const = default;
};

/// Bijection on 0..n-1; map[i] is the destination of source index i.
struct Permutation {
    std::vector<std::uint32_t> map;

    std::size_t size() const { return map.size(); }
    std::uint32_t operator[](std::size_t i) const { return map[i]; }
    bool operator==(const Permutation&) const = default;
};

/// Reorder `v` so that out[p[i]] = v[i].
template <typename T>
std::vector<T> apply_permutation(const Permutation& p, std::vector<T> v) {
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[p[i]] = std::move(v[i]);
    return out;
}

/// Deterministic AES-128-CTR keystream. The counter block is the domain tag
/// zero-padded to 16 bytes with its last 4 bytes replaced by a big-endian
/// block counter starting at 0. Tags longer than 12 bytes are rejected.
Bytes keyed_stream(const std::array<std::uint8_t, 16>& seed, ByteView domain_tag,
                   std::size_t length);

/// AES-CTR under a full-size master key (16/24/32 bytes), same counter layout
/// with the nonce in the first 12 bytes.
Bytes master_ctr_stream(const MasterKey& key, const std::array<std::uint8_t, 12>& nonce,
                        std::size_t length);

/// One AES block encryption under a 16/24/32-byte key.
std::array<std::uint8_t, 16> aes_encrypt_block(ByteView key,
                                               const std::array<std::uint8_t, 16>& block);

/// Keyed Fisher-Yates over 0..n-1. Swap indices are drawn from
/// keyed_stream(seed, domain_tag) as 32-bit big-endian words with rejection
/// sampling (reject w >= floor(2^32/(i+1))*(i+1)), iterating i from n-1 down
/// to 1. Deterministic across platforms.
Permutation derive_permutation(const std::array<std::uint8_t, 16>& seed,
                               ByteView domain_tag, std::size_t n);

Permutation invert_permutation(const Permutation& p);

/// AES-GCM wrap of the serialized shuffle key: nonce (12) || ciphertext (44)
/// || tag (16), 72 bytes total. A fresh random nonce is drawn per call.
Bytes wrap_shuffle_key(const MasterKey& master, const ShuffleKey& key);

/// Throws KeyError("wrong key or corrupted blob") on authentication failure.
ShuffleKey unwrap_shuffle_key(const MasterKey& master, ByteView blob);

Bytes random_bytes(std::size_t n);

/// Convenience for building byte tags like "block" || u32 index.
Bytes make_tag(std::string_view name, std::uint32_t index);
Bytes make_tag(std::string_view name);

} // namespace svcrypt
