/* Copyright 2026 The SPIC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SPIC_ENCODER_COARSE_CODEC_HPP_
#define SPIC_ENCODER_COARSE_CODEC_HPP_

#include <cstdint>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/header.hpp"

namespace spic {

// Lossy compression of the coarse image, dispatched on codec id.
//
// Quality is an integer in [1, 51]; larger is finer for every codec. For the
// reference codec the base quantizer step is 2^((51 - q) / 6) / 256 in the
// orthonormal DCT domain. For BPG the quality maps to `bpgenc -q (51 - q)`.
std::vector<std::uint8_t> EncodeCoarseLossy(
    const CoarseImage& c, int quality,
    CoarseCodec codec = CoarseCodec::kReference,
    const ExternalTools& tools = ExternalTools::FromEnvironment());

// Decodes a coarse payload whose dimensions are the header's full-resolution
// dimensions divided by kDownscaleFactor.
CoarseImage DecodeCoarseLossy(
    const std::vector<std::uint8_t>& payload, const BitstreamHeader& header,
    const ExternalTools& tools = ExternalTools::FromEnvironment());

// Reference block-DCT codec on an arbitrary RGB raster in [0, 1]. Also used
// as the classical full-image baseline in rate-distortion sweeps.
//
// Payload: range-coded blocks followed by a big-endian CRC-32 of
// width(u16) | height(u16) | quality(u8) | body.
namespace dct {

double BaseStep(int quality);
std::vector<std::uint8_t> Encode(const BasicRaster<CoarseTag>& raster,
                                 int quality);
BasicRaster<CoarseTag> Decode(const std::vector<std::uint8_t>& payload,
                              int height, int width, int quality);

}  // namespace dct

// External BPG tools; quality q maps to bpgenc -q (51 - q).
namespace bpg {

std::vector<std::uint8_t> Encode(const BasicRaster<CoarseTag>& raster,
                                 int quality, const ExternalTools& tools);
BasicRaster<CoarseTag> Decode(const std::vector<std::uint8_t>& payload,
                              int height, int width,
                              const ExternalTools& tools);

}  // namespace bpg

}  // namespace spic

#endif  // SPIC_ENCODER_COARSE_CODEC_HPP_
