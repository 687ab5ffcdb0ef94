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

#ifndef SPIC_ENCODER_SSM_CODEC_HPP_
#define SPIC_ENCODER_SSM_CODEC_HPP_

#include <cstdint>
#include <vector>

#include "spic/core/labels.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/header.hpp"

namespace spic {

// Lossless label-map compression, dispatched on codec id.
//
// Reference payload (SsmCodec::kReference):
//   u8        palette size P (1..255)
//   u8[P]     distinct labels present, strictly increasing
//   bytes     range-coded runs (see ssm_codec.cpp)
//   u32 (BE)  CRC-32 of width(u16 BE) | height(u16 BE) | n_c(u8) | all
//             preceding payload bytes
//
// Runs never cross a row boundary. Each run codes its palette index in the
// context of the label directly above its first pixel, then its end column as
// a signed offset from the next label transition in the row above.
std::vector<std::uint8_t> EncodeSsmLossless(
    const SegmentationMap& s, SsmCodec codec = SsmCodec::kReference,
    const ExternalTools& tools = ExternalTools::FromEnvironment());

// Inverse of EncodeSsmLossless using the dimensions, class count and codec id
// from `header`. Malformed, truncated or mismatched payloads raise
// DecodeError; a partial map is never returned.
SegmentationMap DecodeSsmLossless(
    const std::vector<std::uint8_t>& payload, const BitstreamHeader& header,
    const ExternalTools& tools = ExternalTools::FromEnvironment());

// CRC-32 (zlib polynomial) shared by the reference payloads.
std::uint32_t PayloadCrc(const std::vector<std::uint8_t>& context,
                         const std::uint8_t* data, std::size_t size);

}  // namespace spic

#endif  // SPIC_ENCODER_SSM_CODEC_HPP_
