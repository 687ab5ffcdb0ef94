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

#ifndef SPIC_ENCODER_HEADER_HPP_
#define SPIC_ENCODER_HEADER_HPP_

#include <cstdint>

namespace spic {

enum class SsmCodec : std::uint8_t {
  kReference = 0,  // palette + row runs + adaptive range coder
  kFlif = 1,       // external `flif` executable
};

enum class CoarseCodec : std::uint8_t {
  kReference = 0,  // 8x8 block DCT + uniform quantization + range coder
  kBpg = 1,        // external `bpgenc` / `bpgdec` executables
};

inline constexpr int kMinCoarseQuality = 1;
inline constexpr int kMaxCoarseQuality = 51;

// Fixed fields of a .spic bitstream. Width and height are those of the
// full-resolution image; the coarse image is kDownscaleFactor times smaller.
struct BitstreamHeader {
  std::uint8_t version = 1;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t num_classes = 0;
  SsmCodec ssm_codec = SsmCodec::kReference;
  CoarseCodec coarse_codec = CoarseCodec::kReference;
  // Codec-specific quality in [1, 51]; larger is finer for every codec.
  std::uint8_t coarse_quality = 0;

  bool operator==(const BitstreamHeader&) const = default;
};

}  // namespace spic

#endif  // SPIC_ENCODER_HEADER_HPP_
