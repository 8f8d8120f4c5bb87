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

#include "svcrypt/keys.hpp"

#include <cstring>
#include <memory>
#include <numeric>

#include <openssl/evp.h>
#include <openssl/rand.h>

namespace svcrypt {

namespace {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

const EVP_CIPHER* ecb_cipher_for(std::size_t key_len) {
    switch (key_len) {
    case 16: return EVP_aes_128_ecb();
    case 24: return EVP_aes_192_ecb();
    case 32: return EVP_aes_256_ecb();
    default: throw KeyError("key must be 16, 24 or 32 bytes");
    }
}

const EVP_CIPHER* gcm_cipher_for(std::size_t key_len) {
    switch (key_len) {
    case 16: return EVP_aes_128_gcm();
    case 24: return EVP_aes_192_gcm();
    case 32: return EVP_aes_256_gcm();
    default: throw KeyError("key must be 16, 24 or 32 bytes");
    }
}

// CTR keystream with an explicit counter-block prefix. Counter blocks are
// built in batches and pushed through one ECB encryption per batch.
Bytes ctr_stream(ByteView key, const std::uint8_t prefix[12], std::size_t length) {
    Bytes out(length);
    if (length == 0)
        return out;

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), ecb_cipher_for(key.size()), nullptr,
                                   key.data(), nullptr) != 1)
        throw KeyError("cipher init failed");
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);

    constexpr std::size_t kBatchBlocks = 256;
    Bytes counters(kBatchBlocks * 16);
    Bytes stream(kBatchBlocks * 16 + 16);

    const std::size_t total_blocks = (length + 15) / 16;
    std::size_t written = 0;
    for (std::size_t block = 0; block < total_blocks; block += kBatchBlocks) {
        const std::size_t n = std::min(kBatchBlocks, total_blocks - block);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint8_t* c = counters.data() + 16 * i;
            std::memcpy(c, prefix, 12);
            const std::uint32_t ctr = static_cast<std::uint32_t>(block + i);
            c[12] = static_cast<std::uint8_t>(ctr >> 24);
            c[13] = static_cast<std::uint8_t>(ctr >> 16);
            c[14] = static_cast<std::uint8_t>(ctr >> 8);
            c[15] = static_cast<std::uint8_t>(ctr);
        }
        int out_len = 0;
        if (EVP_EncryptUpdate(ctx.get(), stream.data(), &out_len, counters.data(),
                              static_cast<int>(16 * n)) != 1)
            throw KeyError("cipher update failed");
        const std::size_t take = std::min(length - written, 16 * n);
        std::memcpy(out.data() + written, stream.data(), take);
        written += take;
    }
    return out;
}

} // namespace

MasterKey MasterKey::from_hex(std::string_view hex) {
    Bytes bytes = svcrypt::from_hex(hex);
    if (bytes.size() != 16 && bytes.size() != 24 && bytes.size() != 32)
        throw KeyError("master key must be 32, 48 or 64 hex digits");
    return MasterKey{std::move(bytes)};
}

MasterKey MasterKey::random(std::size_t len) {
    if (len != 16 && len != 24 && len != 32)
        throw KeyError("master key must be 16, 24 or 32 bytes");
    return MasterKey{random_bytes(len)};
}

ShuffleKey ShuffleKey::generate() {
    const Bytes r = random_bytes(44);
    return deserialize(r);
}

Bytes ShuffleKey::serialize() const {
    Bytes out;
    out.reserve(44);
    out.insert(out.end(), frame_seed.begin(), frame_seed.end());
    out.insert(out.end(), block_seed.begin(), block_seed.end());
    out.insert(out.end(), stream_nonce.begin(), stream_nonce.end());
    return out;
}

ShuffleKey ShuffleKey::deserialize(ByteView data) {
    if (data.size() != 44)
        throw FormatError("shuffle key must be 44 bytes");
    ShuffleKey k;
    std::memcpy(k.frame_seed.data(), data.data(), 16);
    std::memcpy(k.block_seed.data(), data.data() + 16, 16);
    std::memcpy(k.stream_nonce.data(), data.data() + 32, 12);
    return k;
}

Bytes keyed_stream(const std::array<std::uint8_t, 16>& seed, ByteView domain_tag,
                   std::size_t length) {
    if (domain_tag.size() > 12)
        throw UsageError("domain tag longer than 12 bytes");
    std::uint8_t prefix[12] = {};
    std::memcpy(prefix, domain_tag.data(), domain_tag.size());
    return ctr_stream(ByteView(seed.data(), seed.size()), prefix, length);
}

Bytes master_ctr_stream(const MasterKey& key, const std::array<std::uint8_t, 12>& nonce,
                        std::size_t length) {
    return ctr_stream(ByteView(key.bytes.data(), key.bytes.size()), nonce.data(), length);
}

std::array<std::uint8_t, 16> aes_encrypt_block(ByteView key,
                                               const std::array<std::uint8_t, 16>& block) {
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), ecb_cipher_for(key.size()), nullptr,
                                   key.data(), nullptr) != 1)
        throw KeyError("cipher init failed");
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
    std::array<std::uint8_t, 16> out{};
    int out_len = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &out_len, block.data(), 16) != 1 ||
        out_len != 16)
        throw KeyError("cipher update failed");
    return out;
}

namespace {

// Pulls 32-bit big-endian words off a lazily extended keystream.
class WordSource {
public:
    WordSource(const std::array<std::uint8_t, 16>& seed, ByteView tag)
        : seed_(seed), tag_(tag.begin(), tag.end()) {}

    std::uint32_t next() {
        if (pos_ + 4 > buf_.size())
            refill();
        const std::uint32_t w = (static_cast<std::uint32_t>(buf_[pos_]) << 24) |
                                (static_cast<std::uint32_t>(buf_[pos_ + 1]) << 16) |
                                (static_cast<std::uint32_t>(buf_[pos_ + 2]) << 8) |
                                static_cast<std::uint32_t>(buf_[pos_ + 3]);
        pos_ += 4;
        return w;
    }

private:
    void refill() {
        // Keystream prefixes are stable, so growing the buffer keeps all
        // previously consumed words identical.
        size_ = size_ ? size_ * 2 : 1024;
        buf_ = keyed_stream(seed_, ByteView(tag_.data(), tag_.size()), size_);
    }

    const std::array<std::uint8_t, 16>& seed_;
    Bytes tag_;
    Bytes buf_;
    std::size_t pos_ = 0;
    std::size_t size_ = 0;
};

} // namespace

Permutation derive_permutation(const std::array<std::uint8_t, 16>& seed,
                               ByteView domain_tag, std::size_t n) {
    if (n == 0)
        throw UsageError("empty domain");
    Permutation p;
    p.map.resize(n);
    std::iota(p.map.begin(), p.map.end(), 0u);

    WordSource words(seed, domain_tag);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = (0x100000000ull / bound) * bound;
        std::uint32_t w;
        do {
            w = words.next();
        } while (w >= limit);
        const std::size_t j = static_cast<std::size_t>(w % bound);
        std::swap(p.map[i], p.map[j]);
    }
    return p;
}

Permutation invert_permutation(const Permutation& p) {
    Permutation inv;
    inv.map.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        inv.map[p[i]] = static_cast<std::uint32_t>(i);
    return inv;
}

Bytes wrap_shuffle_key(const MasterKey& master, const ShuffleKey& key) {
    const Bytes plain = key.serialize();
    const Bytes nonce = random_bytes(12);

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx ||
        EVP_EncryptInit_ex(ctx.get(), gcm_cipher_for(master.bytes.size()), nullptr,
                           nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, 12, nullptr) != 1 ||
        EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, master.bytes.data(),
                           nonce.data()) != 1)
        throw KeyError("gcm init failed");

    Bytes out(nonce);
    out.resize(12 + plain.size() + 16);
    int len = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data() + 12, &len, plain.data(),
                          static_cast<int>(plain.size())) != 1)
        throw KeyError("gcm encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + 12 + len, &fin) != 1)
        throw KeyError("gcm finalize failed");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16,
                            out.data() + 12 + plain.size()) != 1)
        throw KeyError("gcm tag failed");
    return out;
}

ShuffleKey unwrap_shuffle_key(const MasterKey& master, ByteView blob) {
    if (blob.size() != 12 + 44 + 16)
        throw KeyError("wrong key or corrupted blob");
    const std::uint8_t* nonce = blob.data();
    const std::uint8_t* ct = blob.data() + 12;
    std::uint8_t tag[16];
    std::memcpy(tag, blob.data() + 12 + 44, 16);

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx ||
        EVP_DecryptInit_ex(ctx.get(), gcm_cipher_for(master.bytes.size()), nullptr,
                           nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, 12, nullptr) != 1 ||
        EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, master.bytes.data(), nonce) != 1)
        throw KeyError("gcm init failed");

    Bytes plain(44);
    int len = 0;
    if (EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ct, 44) != 1)
        throw KeyError("wrong key or corrupted blob");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16, tag) != 1)
        throw KeyError("gcm tag failed");
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &fin) != 1)
        throw KeyError("wrong key or corrupted blob");
    return ShuffleKey::deserialize(plain);
}

Bytes random_bytes(std::size_t n) {
    Bytes out(n);
    if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1)
        throw KeyError("system randomness unavailable");
    return out;
}

Bytes make_tag(std::string_view name, std::uint32_t index) {
    Bytes tag(name.begin(), name.end());
    tag.push_back(static_cast<std::uint8_t>(index >> 24));
    tag.push_back(static_cast<std::uint8_t>(index >> 16));
    tag.push_back(static_cast<std::uint8_t>(index >> 8));
    tag.push_back(static_cast<std::uint8_t>(index));
    return tag;
}

Bytes make_tag(std::string_view name) {
    return Bytes(name.begin(), name.end());
}

} // namespace svcrypt
