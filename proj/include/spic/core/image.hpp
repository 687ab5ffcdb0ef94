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

#ifndef SPIC_CORE_IMAGE_HPP_
#define SPIC_CORE_IMAGE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "spic/core/error.hpp"

namespace spic {

// Integer down/up-scaling factor between the full-resolution image and the
// coarse image carried in the bitstream.
inline constexpr int kDownscaleFactor = 4;
inline constexpr int kRgbChannels = 3;

struct ValueRange {
  double lo;
  double hi;
};

struct FullResTag {
  static constexpr ValueRange kRange{0.0, 1.0};
  static constexpr const char* kName = "Image";
};
struct CoarseTag {
  static constexpr ValueRange kRange{0.0, 1.0};
  static constexpr const char* kName = "CoarseImage";
};
struct ModelRangeTag {
  static constexpr ValueRange kRange{-1.0, 1.0};
  static constexpr const char* kName = "ModelRangeImage";
};

// Planar (channel-major) RGB raster of doubles. The tag fixes the legal value
// range, which every constructor validates; a raster that exists is valid.
template <class Tag>
class BasicRaster {
 public:
  BasicRaster() = default;

  // Filled with a constant; the constant must lie in the tag's range.
  BasicRaster(int height, int width, double fill = Tag::kRange.lo)
      : height_(height), width_(width) {
    CheckDims(height, width);
    CheckValue(fill);
    values_.assign(static_cast<std::size_t>(kRgbChannels) * height * width,
                   fill);
  }

  // Adopts planar values laid out as [channel][row][col].
  static BasicRaster FromPlanar(int height, int width,
                                std::vector<double> values) {
    CheckDims(height, width);
    SPIC_REQUIRE(values.size() == static_cast<std::size_t>(kRgbChannels) *
                                      height * width,
                 std::string(Tag::kName) + ": planar buffer size mismatch");
    for (double v : values) CheckValue(v);
    BasicRaster r;
    r.height_ = height;
    r.width_ = width;
    r.values_ = std::move(values);
    return r;
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  bool empty() const { return values_.empty(); }

  double at(int c, int y, int x) const { return values_[Index(c, y, x)]; }
  // Writes one value; range-checked so the invariant cannot be broken.
  void set(int c, int y, int x, double v) {
    CheckValue(v);
    values_[Index(c, y, x)] = v;
  }

  std::span<const double> values() const { return values_; }
  std::span<const double> plane(int c) const {
    return std::span<const double>(values_).subspan(c * plane_size(),
                                                    plane_size());
  }

  bool operator==(const BasicRaster&) const = default;

 private:
  static void CheckDims(int height, int width) {
    SPIC_REQUIRE(height > 0 && width > 0,
                 std::string(Tag::kName) + ": dimensions must be positive");
  }
  static void CheckValue(double v) {
    // NaN fails this comparison.
    if (!(v >= Tag::kRange.lo && v <= Tag::kRange.hi)) {
      internal::ThrowInvalid(std::string(Tag::kName) +
                             ": value out of range or not finite");
    }
  }
  std::size_t Index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

using Image = BasicRaster<FullResTag>;
using CoarseImage = BasicRaster<CoarseTag>;
using ModelRangeImage = BasicRaster<ModelRangeTag>;

// Reinterprets a raster under another tag with a compatible range (e.g. a
// full-resolution image handed to a codec that works on coarse images).
template <class To, class From>
To Retag(const From& from) {
  return To::FromPlanar(from.height(), from.width(),
                        std::vector<double>(from.values().begin(),
                                            from.values().end()));
}

// v -> 2v - 1. Rejects nothing beyond what Image already guarantees.
ModelRangeImage ToModelRange(const Image& img);
ModelRangeImage ToModelRange(const CoarseImage& img);

// v -> (v + 1) / 2, after clipping to [-1, 1].
Image FromModelRange(const ModelRangeImage& m);
// Same mapping for raw, possibly overshooting sampler output. Non-finite
// values are rejected.
Image FromModelRange(int height, int width, std::span<const double> raw);

}  // namespace spic

#endif  // SPIC_CORE_IMAGE_HPP_
