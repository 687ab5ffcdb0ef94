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

#include "spic/encoder/coarse_codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"
#include "spic/encoder/range_coder.hpp"
#include "spic/encoder/ssm_codec.hpp"

namespace spic {
namespace dct {
namespace {

constexpr int kBlock = 8;
constexpr int kCoeffs = kBlock * kBlock;
// DC step cap keeps flat regions within 1/255 after the colour transform.
constexpr double kMaxDcStep = 1.0 / 64.0;
constexpr double kChromaStepScale = 2.0;
constexpr int kBands = 9;

constexpr std::array<int, kCoeffs> kZigZag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

int BandOf(int zz) {
  static constexpr std::array<int, kBands> kUpper = {0, 1, 2, 5, 9, 14, 20, 27, 63};
  for (int b = 0; b < kBands; ++b) {
    if (zz <= kUpper[b]) return b;
  }
  return kBands - 1;
}

// Orthonormal DCT-II basis, basis[u][x].
const std::array<std::array<double, kBlock>, kBlock>& Basis() {
  static const auto basis = [] {
    std::array<std::array<double, kBlock>, kBlock> b{};
    for (int u = 0; u < kBlock; ++u) {
      const double scale = u == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
      for (int x = 0; x < kBlock; ++x) {
        b[u][x] = scale * std::cos((2 * x + 1) * u * std::numbers::pi / (2.0 * kBlock));
      }
    }
    return b;
  }();
  return basis;
}

using Block = std::array<double, kCoeffs>;

Block Forward(const Block& in) {
  const auto& b = Basis();
  Block tmp{}, out{};
  for (int y = 0; y < kBlock; ++y) {
    for (int u = 0; u < kBlock; ++u) {
      double s = 0;
      for (int x = 0; x < kBlock; ++x) s += b[u][x] * in[y * kBlock + x];
      tmp[y * kBlock + u] = s;
    }
  }
  for (int v = 0; v < kBlock; ++v) {
    for (int u = 0; u < kBlock; ++u) {
      double s = 0;
      for (int y = 0; y < kBlock; ++y) s += b[v][y] * tmp[y * kBlock + u];
      out[v * kBlock + u] = s;
    }
  }
  return out;
}

Block Inverse(const Block& in) {
  const auto& b = Basis();
  Block tmp{}, out{};
  for (int y = 0; y < kBlock; ++y) {
    for (int u = 0; u < kBlock; ++u) {
      double s = 0;
      for (int v = 0; v < kBlock; ++v) s += b[v][y] * in[v * kBlock + u];
      tmp[y * kBlock + u] = s;
    }
  }
  for (int y = 0; y < kBlock; ++y) {
    for (int x = 0; x < kBlock; ++x) {
      double s = 0;
      for (int u = 0; u < kBlock; ++u) s += b[u][x] * tmp[y * kBlock + u];
      out[y * kBlock + x] = s;
    }
  }
  return out;
}

double Step(int quality, int channel, int pos) {
  const int u = pos % kBlock;
  const int v = pos / kBlock;
  const double base = BaseStep(quality);
  if (pos == 0) return std::min(base, kMaxDcStep);
  const double chroma = channel == 0 ? 1.0 : kChromaStepScale;
  return base * chroma * (1.0 + (u + v) / 4.0);
}

// Full-range JPEG YCbCr, chroma centred on zero.
void RgbToYcc(double r, double g, double b, double* out) {
  out[0] = 0.299 * r + 0.587 * g + 0.114 * b;
  out[1] = -0.168735892 * r - 0.331264108 * g + 0.5 * b;
  out[2] = 0.5 * r - 0.418687589 * g - 0.081312411 * b;
}

void YccToRgb(double y, double cb, double cr, double* out) {
  out[0] = y + 1.402 * cr;
  out[1] = y - 0.344136286 * cb - 0.714136286 * cr;
  out[2] = y + 1.772 * cb;
}

struct Models {
  // [luma, chroma]
  std::array<rc::SIntModel, 2> dc;
  std::array<rc::BitTreeModel, 2> last{rc::BitTreeModel(6), rc::BitTreeModel(6)};
  std::array<std::array<rc::SIntModel, kBands>, 2> ac;
};

std::vector<std::uint8_t> CrcContext(int w, int h, int quality) {
  return {static_cast<std::uint8_t>(w >> 8), static_cast<std::uint8_t>(w),
          static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h),
          static_cast<std::uint8_t>(quality)};
}

void CheckQuality(int quality) {
  SPIC_REQUIRE(quality >= kMinCoarseQuality && quality <= kMaxCoarseQuality,
               "coarse codec: quality must be in [1, 51]");
}

}  // namespace

double BaseStep(int quality) {
  CheckQuality(quality);
  return std::exp2((kMaxCoarseQuality - quality) / 6.0) / 256.0;
}

std::vector<std::uint8_t> Encode(const BasicRaster<CoarseTag>& raster,
                                 int quality) {
  CheckQuality(quality);
  const int h = raster.height();
  const int w = raster.width();
  SPIC_REQUIRE(w <= 0xFFFF && h <= 0xFFFF, "coarse codec: raster too large");
  const int bh = (h + kBlock - 1) / kBlock;
  const int bw = (w + kBlock - 1) / kBlock;

  // Colour transform into three planes.
  std::vector<double> ycc(static_cast<std::size_t>(3) * h * w);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double out[3];
      RgbToYcc(raster.at(0, y, x), raster.at(1, y, x), raster.at(2, y, x), out);
      for (int c = 0; c < 3; ++c) ycc[c * plane + y * w + x] = out[c];
    }
  }

  Models m;
  rc::Encoder enc;
  for (int c = 0; c < 3; ++c) {
    const int kind = c == 0 ? 0 : 1;
    int prev_dc = 0;
    for (int by = 0; by < bh; ++by) {
      for (int bx = 0; bx < bw; ++bx) {
        Block blk{};
        for (int y = 0; y < kBlock; ++y) {
          const int sy = std::min(by * kBlock + y, h - 1);
          for (int x = 0; x < kBlock; ++x) {
            const int sx = std::min(bx * kBlock + x, w - 1);
            blk[y * kBlock + x] = ycc[c * plane + sy * w + sx];
          }
        }
        const Block coeff = Forward(blk);
        std::array<int, kCoeffs> q{};
        int last = 0;
        for (int k = 0; k < kCoeffs; ++k) {
          const int pos = kZigZag[k];
          q[k] = static_cast<int>(std::lround(coeff[pos] / Step(quality, c, pos)));
          if (k > 0 && q[k] != 0) last = k;
        }
        m.dc[kind].Encode(enc, q[0] - prev_dc);
        prev_dc = q[0];
        m.last[kind].Encode(enc, static_cast<std::uint32_t>(last));
        for (int k = 1; k <= last; ++k) m.ac[kind][BandOf(k)].Encode(enc, q[k]);
      }
    }
  }
  std::vector<std::uint8_t> out = enc.Finish();
  const std::uint32_t crc = PayloadCrc(CrcContext(w, h, quality), out.data(), out.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(crc >> shift));
  }
  return out;
}

BasicRaster<CoarseTag> Decode(const std::vector<std::uint8_t>& payload,
                              int h, int w, int quality) {
  if (quality < kMinCoarseQuality || quality > kMaxCoarseQuality) {
    throw DecodeError("coarse decode: quality out of range");
  }
  if (h <= 0 || w <= 0) throw DecodeError("coarse decode: invalid dimensions");
  if (payload.size() < 5 + 4) throw DecodeError("coarse payload truncated");
  const std::size_t crc_pos = payload.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored = (stored << 8) | payload[crc_pos + i];
  if (stored != PayloadCrc(CrcContext(w, h, quality), payload.data(), crc_pos)) {
    throw DecodeError("coarse payload checksum mismatch");
  }

  const int bh = (h + kBlock - 1) / kBlock;
  const int bw = (w + kBlock - 1) / kBlock;
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  std::vector<double> ycc(3 * plane);
  Models m;
  rc::Decoder dec(std::span<const std::uint8_t>(payload.data(), crc_pos));
  for (int c = 0; c < 3; ++c) {
    const int kind = c == 0 ? 0 : 1;
    long long prev_dc = 0;
    for (int by = 0; by < bh; ++by) {
      for (int bx = 0; bx < bw; ++bx) {
        Block coeff{};
        const long long dc = prev_dc + m.dc[kind].Decode(dec);
        prev_dc = dc;
        coeff[0] = static_cast<double>(dc) * Step(quality, c, 0);
        const int last = static_cast<int>(m.last[kind].Decode(dec));
        for (int k = 1; k <= last; ++k) {
          const int pos = kZigZag[k];
          coeff[pos] = m.ac[kind][BandOf(k)].Decode(dec) * Step(quality, c, pos);
        }
        const Block pix = Inverse(coeff);
        for (int y = 0; y < kBlock; ++y) {
          const int sy = by * kBlock + y;
          if (sy >= h) break;
          for (int x = 0; x < kBlock; ++x) {
            const int sx = bx * kBlock + x;
            if (sx >= w) break;
            ycc[c * plane + sy * w + sx] = pix[y * kBlock + x];
          }
        }
      }
    }
  }
  dec.ExpectEnd();

  std::vector<double> rgb(3 * plane);
  for (std::size_t i = 0; i < plane; ++i) {
    double out[3];
    YccToRgb(ycc[i], ycc[plane + i], ycc[2 * plane + i], out);
    for (int c = 0; c < 3; ++c) {
      const double v = std::isfinite(out[c]) ? out[c] : 0.0;
      rgb[c * plane + i] = std::clamp(v, 0.0, 1.0);
    }
  }
  return BasicRaster<CoarseTag>::FromPlanar(h, w, std::move(rgb));
}

}  // namespace dct

namespace bpg {

std::vector<std::uint8_t> Encode(const BasicRaster<CoarseTag>& c, int quality,
                                 const ExternalTools& tools) {
  TempDir dir;
  const auto in = dir.path() / "coarse.png";
  const auto out = dir.path() / "coarse.bpg";
  WriteImagePng(in.string(), Retag<Image>(c));
  RunTool({tools.bpgenc, "-q", std::to_string(kMaxCoarseQuality - quality),
           "-o", out.string(), in.string()});
  return ReadFileBytes(out);
}

BasicRaster<CoarseTag> Decode(const std::vector<std::uint8_t>& payload,
                              int h, int w, const ExternalTools& tools) {
  TempDir dir;
  const auto in = dir.path() / "coarse.bpg";
  const auto out = dir.path() / "coarse.png";
  WriteFileBytes(in, payload);
  try {
    RunTool({tools.bpgdec, "-o", out.string(), in.string()});
  } catch (const ToolUnavailableError& e) {
    if (!ToolAvailable(tools.bpgdec)) throw;
    throw DecodeError(std::string("BPG payload rejected: ") + e.what());
  }
  Image img;
  try {
    img = ReadImagePng(out.string());
  } catch (const Error& e) {
    throw DecodeError(std::string("BPG output invalid: ") + e.what());
  }
  if (img.height() != h || img.width() != w) {
    throw DecodeError("BPG output dimensions do not match header");
  }
  return Retag<CoarseImage>(img);
}

}  // namespace bpg

std::vector<std::uint8_t> EncodeCoarseLossy(const CoarseImage& c, int quality,
                                            CoarseCodec codec,
                                            const ExternalTools& tools) {
  SPIC_REQUIRE(quality >= kMinCoarseQuality && quality <= kMaxCoarseQuality,
               "EncodeCoarseLossy: quality must be in [1, 51]");
  switch (codec) {
    case CoarseCodec::kReference:
      return dct::Encode(c, quality);
    case CoarseCodec::kBpg:
      return bpg::Encode(c, quality, tools);
  }
  internal::ThrowInvalid("EncodeCoarseLossy: unknown codec id");
}

CoarseImage DecodeCoarseLossy(const std::vector<std::uint8_t>& payload,
                              const BitstreamHeader& header,
                              const ExternalTools& tools) {
  if (header.width % kDownscaleFactor != 0 ||
      header.height % kDownscaleFactor != 0 || header.width == 0 ||
      header.height == 0) {
    throw DecodeError("coarse decode: header dimensions not divisible by factor");
  }
  const int h = header.height / kDownscaleFactor;
  const int w = header.width / kDownscaleFactor;
  switch (header.coarse_codec) {
    case CoarseCodec::kReference:
      return dct::Decode(payload, h, w, header.coarse_quality);
    case CoarseCodec::kBpg:
      return bpg::Decode(payload, h, w, tools);
  }
  throw DecodeError("coarse decode: unknown codec id");
}

}  // namespace spic
