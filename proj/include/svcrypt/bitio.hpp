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

#include "svcrypt/common.hpp"

namespace svcrypt {

/// MSB-first bit sink backed by a growable byte buffer.
class BitWriter {
public:
    void put_bit(unsigned bit);
    void put_bits(std::uint32_t value, unsigned count); // most significant of `count` first
    void put_ue(std::uint32_t value);                   // Exp-Golomb: k zeros, '1', k info bits
    void align();                                       // pad with zero bits to a byte boundary

    std::uint64_t bit_count() const { return bit_count_; }
    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
    std::uint64_t bit_count_ = 0;
};

/// MSB-first bit source over a byte span. Out-of-range reads throw FormatError.
class BitReader {
public:
    explicit BitReader(ByteView data) : data_(data) {}

    unsigned get_bit();
    std::uint32_t get_bits(unsigned count);
    std::uint32_t get_ue(unsigned max_info_bits = 31);
    void skip_to_byte(); // consume padding; non-zero pad bits are a syntax error

    std::uint64_t tell() const { return pos_; }
    std::uint64_t bits_left() const { return 8 * data_.size() - pos_; }

private:
    ByteView data_;
    std::uint64_t pos_ = 0;
};

/// Width of the info field of the Exp-Golomb code for `value`.
unsigned ue_info_bits(std::uint32_t value);

/// Total code length (prefix + terminator + info) for `value`.
unsigned ue_code_length(std::uint32_t value);

/// Single-bit accessors on packed MSB-first buffers.
inline unsigned get_bit_at(ByteView data, std::uint64_t pos) {
    return (data[pos >> 3] >> (7 - (pos & 7))) & 1u;
}
inline void set_bit_at(std::span<std::uint8_t> data, std::uint64_t pos, unsigned bit) {
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (pos & 7)));
    if (bit)
        data[pos >> 3] |= mask;
    else
        data[pos >> 3] &= static_cast<std::uint8_t>(~mask);
}

} // namespace svcrypt
