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

#include "spic/encoder/ssm_codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <memory>

#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"
#include "spic/encoder/range_coder.hpp"

namespace spic {
namespace {

// Adaptive state shared by encoder and decoder. Contexts for the palette
// index are keyed by the palette index above (P = "no row above").
class RunModels {
 public:
  explicit RunModels(int palette_size)
      : index_bits_(palette_size > 1 ? std::bit_width(
                                           static_cast<unsigned>(palette_size - 1))
                                     : 0) {
    for (int i = 0; i <= palette_size; ++i) {
      symbol_.push_back(std::make_unique<rc::BitTreeModel>(index_bits_));
    }
  }
  int index_bits() const { return index_bits_; }
  rc::BitTreeModel& symbol(int above) { return *symbol_[above]; }
  rc::SIntModel& end_offset(bool first_row) {
    return first_row ? end_first_row_ : end_;
  }

 private:
  int index_bits_;
  std::vector<std::unique_ptr<rc::BitTreeModel>> symbol_;
  rc::SIntModel end_first_row_;
  rc::SIntModel end_;
};

// First column after `x` at which the row above changes label, or `width`.
int PredictRunEnd(const std::uint8_t* above, int x, int width) {
  if (above == nullptr) return width;
  for (int c = x + 1; c < width; ++c) {
    if (above[c] != above[c - 1]) return c;
  }
  return width;
}

std::vector<std::uint8_t> CrcContext(int width, int height, int num_classes) {
  return {static_cast<std::uint8_t>(width >> 8),
          static_cast<std::uint8_t>(width),
          static_cast<std::uint8_t>(height >> 8),
          static_cast<std::uint8_t>(height),
          static_cast<std::uint8_t>(num_classes)};
}

void AppendU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::vector<std::uint8_t> EncodeReference(const SegmentationMap& s) {
  const int h = s.height();
  const int w = s.width();
  std::array<int, 256> index_of{};
  index_of.fill(-1);
  std::vector<std::uint8_t> palette;
  for (std::uint8_t l : s.labels()) index_of[l] = 0;
  for (int l = 0; l < 256; ++l) {
    if (index_of[l] == 0) {
      index_of[l] = static_cast<int>(palette.size());
      palette.push_back(static_cast<std::uint8_t>(l));
    }
  }
  const int p = static_cast<int>(palette.size());

  // Rows as palette indices.
  std::vector<std::uint8_t> idx(s.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = static_cast<std::uint8_t>(index_of[s.labels()[i]]);
  }

  RunModels models(p);
  rc::Encoder enc;
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = idx.data() + static_cast<std::size_t>(y) * w;
    const std::uint8_t* above = y > 0 ? row - w : nullptr;
    int x = 0;
    while (x < w) {
      const std::uint8_t sym = row[x];
      int end = x + 1;
      while (end < w && row[end] == sym) ++end;
      if (models.index_bits() > 0) {
        models.symbol(above ? above[x] : p).Encode(enc, sym);
      }
      models.end_offset(y == 0).Encode(enc, end - PredictRunEnd(above, x, w));
      x = end;
    }
  }
  std::vector<std::uint8_t> body = enc.Finish();

  std::vector<std::uint8_t> out;
  out.reserve(1 + palette.size() + body.size() + 4);
  out.push_back(static_cast<std::uint8_t>(p));
  out.insert(out.end(), palette.begin(), palette.end());
  out.insert(out.end(), body.begin(), body.end());
  AppendU32(out, PayloadCrc(CrcContext(w, h, s.num_classes()), out.data(),
                            out.size()));
  return out;
}

SegmentationMap DecodeReference(const std::vector<std::uint8_t>& payload,
                                int w, int h, int num_classes) {
  if (payload.size() < 1 + 1 + 5 + 4) {
    throw DecodeError("SSM payload truncated");
  }
  const std::size_t crc_pos = payload.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored = (stored << 8) | payload[crc_pos + i];
  if (stored != PayloadCrc(CrcContext(w, h, num_classes), payload.data(),
                           crc_pos)) {
    throw DecodeError("SSM payload checksum mismatch");
  }

  const int p = payload[0];
  if (p == 0 || 1 + static_cast<std::size_t>(p) > crc_pos) {
    throw DecodeError("SSM palette malformed");
  }
  std::vector<std::uint8_t> palette(payload.begin() + 1,
                                    payload.begin() + 1 + p);
  for (int i = 0; i < p; ++i) {
    if (palette[i] >= num_classes || (i > 0 && palette[i] <= palette[i - 1])) {
      throw DecodeError("SSM palette malformed");
    }
  }

  rc::Decoder dec(std::span<const std::uint8_t>(payload.data() + 1 + p,
                                                crc_pos - 1 - p));
  RunModels models(p);
  std::vector<std::uint8_t> idx(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = idx.data() + static_cast<std::size_t>(y) * w;
    const std::uint8_t* above = y > 0 ? row - w : nullptr;
    int x = 0;
    while (x < w) {
      std::uint32_t sym = 0;
      if (models.index_bits() > 0) {
        sym = models.symbol(above ? above[x] : p).Decode(dec);
        if (sym >= static_cast<std::uint32_t>(p)) {
          throw DecodeError("SSM palette index out of range");
        }
      }
      const long long end = static_cast<long long>(PredictRunEnd(above, x, w)) +
                            models.end_offset(y == 0).Decode(dec);
      if (end <= x || end > w) throw DecodeError("SSM run length invalid");
      std::fill(row + x, row + end, static_cast<std::uint8_t>(sym));
      x = static_cast<int>(end);
    }
  }
  dec.ExpectEnd();

  std::vector<std::uint8_t> labels(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = palette[idx[i]];
  return SegmentationMap::FromLabels(h, w, num_classes, std::move(labels));
}

std::vector<std::uint8_t> EncodeFlif(const SegmentationMap& s,
                                     const ExternalTools& tools) {
  TempDir dir;
  const auto in = dir.path() / "ssm.png";
  const auto out = dir.path() / "ssm.flif";
  WriteLabelPng(in.string(), s);
  RunTool({tools.flif, "-e", "--overwrite", in.string(), out.string()});
  return ReadFileBytes(out);
}

SegmentationMap DecodeFlif(const std::vector<std::uint8_t>& payload, int w,
                           int h, int num_classes, const ExternalTools& tools) {
  TempDir dir;
  const auto in = dir.path() / "ssm.flif";
  const auto out = dir.path() / "ssm.png";
  WriteFileBytes(in, payload);
  try {
    RunTool({tools.flif, "-d", "--overwrite", in.string(), out.string()});
  } catch (const ToolUnavailableError& e) {
    if (!ToolAvailable(tools.flif)) throw;
    throw DecodeError(std::string("FLIF payload rejected: ") + e.what());
  }
  SegmentationMap s;
  try {
    s = ReadLabelPng(out.string(), num_classes);
  } catch (const Error& e) {
    throw DecodeError(std::string("FLIF output invalid: ") + e.what());
  }
  if (s.width() != w || s.height() != h) {
    throw DecodeError("FLIF output dimensions do not match header");
  }
  return s;
}

}  // namespace

std::uint32_t PayloadCrc(const std::vector<std::uint8_t>& context,
                         const std::uint8_t* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, context.data(), static_cast<uInt>(context.size()));
  crc = crc32(crc, data, static_cast<uInt>(size));
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> EncodeSsmLossless(const SegmentationMap& s,
                                            SsmCodec codec,
                                            const ExternalTools& tools) {
  SPIC_REQUIRE(s.size() > 0, "EncodeSsmLossless: empty map");
  SPIC_REQUIRE(s.width() <= 0xFFFF && s.height() <= 0xFFFF,
               "EncodeSsmLossless: map too large");
  switch (codec) {
    case SsmCodec::kReference:
      return EncodeReference(s);
    case SsmCodec::kFlif:
      return EncodeFlif(s, tools);
  }
  internal::ThrowInvalid("EncodeSsmLossless: unknown codec id");
}

SegmentationMap DecodeSsmLossless(const std::vector<std::uint8_t>& payload,
                                  const BitstreamHeader& header,
                                  const ExternalTools& tools) {
  if (header.width == 0 || header.height == 0 || header.num_classes == 0) {
    throw DecodeError("SSM decode: header dimensions or n_c are zero");
  }
  switch (header.ssm_codec) {
    case SsmCodec::kReference:
      return DecodeReference(payload, header.width, header.height,
                             header.num_classes);
    case SsmCodec::kFlif:
      return DecodeFlif(payload, header.width, header.height,
                        header.num_classes, tools);
  }
  throw DecodeError("SSM decode: unknown codec id");
}

}  // namespace spic
