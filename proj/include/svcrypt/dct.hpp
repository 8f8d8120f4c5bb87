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

using CoeffBlock = std::array<double, 64>;       // row-major frequency domain
using PixelBlock = std::array<std::uint8_t, 64>; // row-major spatial domain
using ResidualBlock = std::array<std::int16_t, 64>;
using LevelBlock = std::array<std::int16_t, 64>; // quantized levels in zigzag order

/// Raster index of the i-th zigzag position.
extern const std::array<std::uint8_t, 64> kZigzag;

/// Orthonormal 2-D DCT-II of (pixel - 128). A constant 128 block maps to all zeros.
CoeffBlock dct8x8_forward(const PixelBlock& pixels);

/// Inverse of dct8x8_forward: transform, +128, round half away from zero, clamp to 0..255.
PixelBlock dct8x8_inverse(const CoeffBlock& coeffs);

/// Orthonormal 2-D DCT-II of a signed residual block (no centering).
CoeffBlock dct8x8_forward_residual(const ResidualBlock& residual);

/// Inverse residual transform: round half away from zero, clamp to -255..255.
ResidualBlock dct8x8_inverse_residual(const CoeffBlock& coeffs);

/// Uniform quantizer with step 2*qp and zigzag scan. Levels beyond 12 signed
/// bits throw FormatError (the step is too small for the input range).
LevelBlock quantize_block(const CoeffBlock& coeffs, int qp);

/// Undo quantize_block: coeff = level * 2*qp, zigzag scan undone.
CoeffBlock dequantize_block(const LevelBlock& levels, int qp);

/// Round half away from zero, as the codec does everywhere.
long round_half_away(double v);

} // namespace svcrypt
