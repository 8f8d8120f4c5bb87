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

#include "svcrypt/bitio.hpp"

#include <bit>

namespace svcrypt {

void BitWriter::put_bit(unsigned bit) {
    const unsigned offset = bit_count_ & 7;
    if (offset == 0)
        buf_.push_back(0);
    if (bit & 1)
        buf_.back() |= static_cast<std::uint8_t>(1u << (7 - offset));
    ++bit_count_;
}

void BitWriter::put_bits(std::uint32_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;)
        put_bit((value >> i) & 1u);
}

void BitWriter::put_ue(std::uint32_t value) {
    // value+1 = 1xxxx...x with k info bits; emit k zeros, the leading 1, then the info bits.
    const std::uint64_t v = static_cast<std::uint64_t>(value) + 1;
    const unsigned k = static_cast<unsigned>(std::bit_width(v)) - 1;
    for (unsigned i = 0; i < k; ++i)
        put_bit(0);
    put_bit(1);
    put_bits(static_cast<std::uint32_t>(v - (1ull << k)), k);
}

void BitWriter::align() {
    while (bit_count_ & 7)
        put_bit(0);
}

unsigned BitReader::get_bit() {
    if (pos_ >= 8 * data_.size())
        throw FormatError("bitstream truncated");
    const unsigned bit = get_bit_at(data_, pos_);
    ++pos_;
    return bit;
}

std::uint32_t BitReader::get_bits(unsigned count) {
    std::uint32_t value = 0;
    for (unsigned i = 0; i < count; ++i)
        value = (value << 1) | get_bit();
    return value;
}

std::uint32_t BitReader::get_ue(unsigned max_info_bits) {
    unsigned k = 0;
    while (get_bit() == 0) {
        if (++k > max_info_bits)
            throw FormatError("exp-golomb prefix overrun");
    }
    const std::uint64_t info = get_bits(k);
    return static_cast<std::uint32_t>((1ull << k) - 1 + info);
}

void BitReader::skip_to_byte() {
    while (pos_ & 7) {
        if (get_bit() != 0)
            throw FormatError("non-zero padding bits");
    }
}

unsigned ue_info_bits(std::uint32_t value) {
    return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(value) + 1)) - 1;
}

unsigned ue_code_length(std::uint32_t value) {
    return 2 * ue_info_bits(value) + 1;
}

} // namespace svcrypt
