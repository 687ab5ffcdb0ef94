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

#ifndef SPIC_ENCODER_BITSTREAM_HPP_
#define SPIC_ENCODER_BITSTREAM_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spic/core/error.hpp"
#include "spic/encoder/header.hpp"

namespace spic {

// .spic container, all integers big-endian:
//
//   offset size field
//        0    4 magic "SPIC"
//        4    1 version (1)
//        5    2 width
//        7    2 height
//        9    1 n_c
//       10    1 ssm_codec_id
//       11    1 coarse_codec_id
//       12    1 coarse_quality
//       13    4 ssm_len
//       17    4 coarse_len
//       21      ssm payload, then coarse payload
inline constexpr std::array<std::uint8_t, 4> kMagic = {'S', 'P', 'I', 'C'};
inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr std::size_t kHeaderSize = 21;

class BitstreamError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};
class TruncatedBitstreamError : public BitstreamError {
 public:
  using BitstreamError::BitstreamError;
};
class BadMagicError : public BitstreamError {
 public:
  using BitstreamError::BitstreamError;
};
class UnsupportedVersionError : public BitstreamError {
 public:
  using BitstreamError::BitstreamError;
};
class LengthMismatchError : public BitstreamError {
 public:
  using BitstreamError::BitstreamError;
};
// A header field holds a value no valid encoder produces.
class InvalidHeaderError : public BitstreamError {
 public:
  using BitstreamError::BitstreamError;
};

struct SemanticBitstream {
  BitstreamHeader header;
  std::vector<std::uint8_t> ssm_payload;
  std::vector<std::uint8_t> coarse_payload;

  std::size_t size_bytes() const {
    return kHeaderSize + ssm_payload.size() + coarse_payload.size();
  }
  bool operator==(const SemanticBitstream&) const = default;
};

// Serializes header and payloads. Rejects payloads of 2^32 bytes or more and
// header values that Unpack would refuse.
std::vector<std::uint8_t> Pack(const std::vector<std::uint8_t>& ssm_bytes,
                               const std::vector<std::uint8_t>& coarse_bytes,
                               const BitstreamHeader& meta);
std::vector<std::uint8_t> Pack(const SemanticBitstream& bs);

// Parses a container. Each failure class has its own exception type.
SemanticBitstream Unpack(std::span<const std::uint8_t> bytes);

// Checks the header invariants shared by Pack and Unpack.
void ValidateHeader(const BitstreamHeader& h);

}  // namespace spic

#endif  // SPIC_ENCODER_BITSTREAM_HPP_
