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

#include "spic/encoder/bitstream.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "spic/core/image.hpp"

namespace spic {
namespace {

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}
std::uint16_t GetU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}
std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t at) {
  return (static_cast<std::uint32_t>(b[at]) << 24) |
         (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) | b[at + 3];
}

}  // namespace

void ValidateHeader(const BitstreamHeader& h) {
  if (h.version != kBitstreamVersion) {
    throw UnsupportedVersionError("unsupported bitstream version " +
                                  std::to_string(h.version));
  }
  if (h.width == 0 || h.height == 0 || h.width % kDownscaleFactor != 0 ||
      h.height % kDownscaleFactor != 0) {
    throw InvalidHeaderError("image dimensions must be positive multiples of " +
                             std::to_string(kDownscaleFactor));
  }
  if (h.num_classes == 0) throw InvalidHeaderError("n_c must be >= 1");
  if (static_cast<int>(h.ssm_codec) > static_cast<int>(SsmCodec::kFlif)) {
    throw InvalidHeaderError("unknown ssm codec id");
  }
  if (static_cast<int>(h.coarse_codec) > static_cast<int>(CoarseCodec::kBpg)) {
    throw InvalidHeaderError("unknown coarse codec id");
  }
  if (h.coarse_quality < kMinCoarseQuality ||
      h.coarse_quality > kMaxCoarseQuality) {
    throw InvalidHeaderError("coarse quality out of range");
  }
}

std::vector<std::uint8_t> Pack(const std::vector<std::uint8_t>& ssm_bytes,
                               const std::vector<std::uint8_t>& coarse_bytes,
                               const BitstreamHeader& meta) {
  constexpr std::size_t kMaxLen = std::numeric_limits<std::uint32_t>::max();
  SPIC_REQUIRE(ssm_bytes.size() <= kMaxLen && coarse_bytes.size() <= kMaxLen,
               "Pack: payload exceeds 2^32 - 1 bytes");
  try {
    ValidateHeader(meta);
  } catch (const BitstreamError& e) {
    internal::ThrowInvalid(std::string("Pack: ") + e.what());
  }
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kHeaderSize + ssm_bytes.size() + coarse_bytes.size());
  out.push_back(meta.version);
  PutU16(out, meta.width);
  PutU16(out, meta.height);
  out.push_back(meta.num_classes);
  out.push_back(static_cast<std::uint8_t>(meta.ssm_codec));
  out.push_back(static_cast<std::uint8_t>(meta.coarse_codec));
  out.push_back(meta.coarse_quality);
  PutU32(out, static_cast<std::uint32_t>(ssm_bytes.size()));
  PutU32(out, static_cast<std::uint32_t>(coarse_bytes.size()));
  out.insert(out.end(), ssm_bytes.begin(), ssm_bytes.end());
  out.insert(out.end(), coarse_bytes.begin(), coarse_bytes.end());
  return out;
}

std::vector<std::uint8_t> Pack(const SemanticBitstream& bs) {
  return Pack(bs.ssm_payload, bs.coarse_payload, bs.header);
}

SemanticBitstream Unpack(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw BadMagicError("not a SPIC bitstream (bad magic)");
  }
  if (bytes.size() < kHeaderSize) {
    throw TruncatedBitstreamError("bitstream shorter than its header");
  }
  SemanticBitstream bs;
  BitstreamHeader& h = bs.header;
  h.version = bytes[4];
  if (h.version != kBitstreamVersion) {
    throw UnsupportedVersionError("unsupported bitstream version " +
                                  std::to_string(h.version));
  }
  h.width = GetU16(bytes, 5);
  h.height = GetU16(bytes, 7);
  h.num_classes = bytes[9];
  h.ssm_codec = static_cast<SsmCodec>(bytes[10]);
  h.coarse_codec = static_cast<CoarseCodec>(bytes[11]);
  h.coarse_quality = bytes[12];
  ValidateHeader(h);
  const std::uint64_t ssm_len = GetU32(bytes, 13);
  const std::uint64_t coarse_len = GetU32(bytes, 17);
  if (kHeaderSize + ssm_len + coarse_len != bytes.size()) {
    throw LengthMismatchError(
        "declared payload lengths (" + std::to_string(ssm_len) + " + " +
        std::to_string(coarse_len) + ") do not match " +
        std::to_string(bytes.size() - kHeaderSize) + " payload bytes");
  }
  const auto ssm_begin = bytes.begin() + kHeaderSize;
  bs.ssm_payload.assign(ssm_begin, ssm_begin + static_cast<std::ptrdiff_t>(ssm_len));
  bs.coarse_payload.assign(ssm_begin + static_cast<std::ptrdiff_t>(ssm_len),
                           bytes.end());
  return bs;
}

}  // namespace spic
