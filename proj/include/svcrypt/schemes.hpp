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

#include <optional>
#include <string_view>

#include "svcrypt/codec.hpp"
#include "svcrypt/container.hpp"
#include "svcrypt/keys.hpp"

namespace svcrypt {

enum class SchemeId : std::uint8_t {
    None = 0,
    Proposed = 1,   // frame shuffle + block jumble + selective AES on codewords
    Full = 2,       // AES-CTR over every payload byte
    Pure = 3,       // one fixed byte permutation per frame (raw payloads)
    Crisscross = 4, // keyed 64-entry permutation of each block's levels, re-encoded
    Choose = 5,     // every floor(1/f)-th frame fully AES-encrypted
    Perceptual = 6, // sign/intra-DC/MVD bits only, first ceil(p*M) macroblocks
};

std::string_view scheme_name(SchemeId id);
SchemeId scheme_from_name(std::string_view name);

/// Taxonomy bucket of a scheme: "completely layered", "permutation",
/// "selective" or "perceptual".
std::string_view classify(SchemeId id);

struct SchemeParams {
    SchemeId scheme = SchemeId::Proposed;
    std::optional<CwMask> classes; // proposed/perceptual; scheme default if unset
    double frame_fraction = 0.5;   // choose: fraction of frames encrypted
    double block_fraction = 1.0;   // perceptual: leading fraction of macroblocks

    CwMask resolved_classes() const {
        if (classes)
            return *classes;
        return scheme == SchemeId::Perceptual ? kPerceptualClasses : kAllCodewordClasses;
    }
};

struct StageTimings {
    double shredding_ms = 0;
    double shuffling_ms = 0;
    double stitching_ms = 0;
    double aes_ms = 0;
};

/// Source of truth for the encryption-ratio metrics. Byte counts cover video
/// payloads; aes_bits counts bits actually fed through the AES keystream.
struct SchemeReport {
    std::uint64_t bytes_touched = 0;
    std::uint64_t total_payload_bytes = 0;
    std::uint64_t aes_bits = 0;
    std::uint64_t original_file_bytes = 0;
    std::uint64_t encrypted_file_bytes = 0;
    StageTimings timings;
};

/// Encrypt a clean container under `master`. The input is not modified.
/// Scheme prerequisites (codec, parameter ranges) are checked up front.
std::pair<SvcFile, SchemeReport> encrypt(const SvcFile& input, const MasterKey& master,
                                         const SchemeParams& params);

/// Exact inverse of encrypt for the same master key and params. Non-key
/// parameters (classes, fractions) must match the ones used to encrypt;
/// defaults invert default encryptions.
SvcFile decrypt(const SvcFile& input, const MasterKey& master,
                const SchemeParams& params = {});

} // namespace svcrypt
