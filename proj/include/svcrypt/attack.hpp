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

#include "svcrypt/codec.hpp"
#include "svcrypt/container.hpp"
#include "svcrypt/keys.hpp"

namespace svcrypt {

// Known-plaintext attacks on the permutation schemes. The attacker model:
// codec, container, qp and scheme are known, keys are not. Ambiguity is
// reported as candidate classes rather than hidden behind a guess.

/// Candidate destination sets per source index, induced by value equality
/// between a known plaintext and its ciphertext. Singleton sets are exact
/// recoveries; the true permutation always lies inside the sets.
struct PermutationClasses {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> candidates; // sorted, per source index

    double singleton_fraction() const;
};

/// Classes from one (plaintext, ciphertext) pair of a byte-permutation
/// cipher: source i may map to j iff plain[i] == cipher[j]. Throws
/// FormatError("not a permutation pair") when the byte multisets differ.
PermutationClasses kpa_byte_permutation(ByteView plain, ByteView cipher);

/// Refine: intersect candidate sets obtained from several known pairs.
PermutationClasses intersect_classes(const PermutationClasses& a,
                                     const PermutationClasses& b);

struct RecoveryResult {
    std::vector<Bytes> frames;
    double provable_rate = 0; // fraction of positions pinned by singleton classes
};

/// Apply recovered classes to further ciphertext frames. Singleton classes
/// place their byte exactly; ambiguous positions take the class-minimum
/// candidate.
RecoveryResult apply_recovered(const PermutationClasses& classes,
                               const std::vector<Bytes>& cipher_frames);

/// Coefficient-permutation recovery for the crisscross scheme. The known
/// frames must be the first `known_raws.frames.size()` frames of the clip so
/// the encoder's reference chain can be replayed. Returns per-slot candidate
/// sets over the 64 zigzag positions.
struct CoeffKpaResult {
    std::array<std::vector<std::uint8_t>, 64> slot_candidates;
    bool unique = false;
    Permutation recovered; // valid when unique

    double determined_fraction() const;
};

CoeffKpaResult kpa_coefficient_permutation(const RawVideo& known_raws,
                                           const SvcFile& encrypted, int qp, int gop);

// ---- end-to-end harnesses -------------------------------------------------

/// Result of running the byte-permutation attack against a whole clip.
struct ByteKpaReport {
    bool precondition_ok = false; // false: ciphertext is not a byte permutation
    int known_frames = 0;
    double provable_rate = 0;
    double recovery_rate = 0; // mean exact-byte accuracy on unseen frames
};

/// Learn classes from the first `known_frames` (plaintext, ciphertext) pairs
/// and measure recovery accuracy on the remaining frames.
ByteKpaReport run_byte_kpa(const SvcFile& plain, const SvcFile& encrypted,
                           int known_frames);

struct CoeffKpaReport {
    int known_frames = 0;
    bool unique = false;
    double determined_fraction = 0;
    double holdout_psnr_db = 0; // held-out frame decoded with the recovered permutation
};

CoeffKpaReport run_coefficient_kpa(const RawVideo& plain, const SvcFile& encrypted,
                                   int known_frames, int qp, int gop);

} // namespace svcrypt
