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

#include "spic/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace spic {
namespace {

template <class Raster>
ModelRangeImage ToModelRangeImpl(const Raster& img) {
  std::vector<double> out(img.values().size());
  std::transform(img.values().begin(), img.values().end(), out.begin(),
                 [](double v) { return 2.0 * v - 1.0; });
  return ModelRangeImage::FromPlanar(img.height(), img.width(),
                                     std::move(out));
}

}  // namespace

ModelRangeImage ToModelRange(const Image& img) { return ToModelRangeImpl(img); }
ModelRangeImage ToModelRange(const CoarseImage& img) {
  return ToModelRangeImpl(img);
}

Image FromModelRange(const ModelRangeImage& m) {
  return FromModelRange(m.height(), m.width(), m.values());
}

Image FromModelRange(int height, int width, std::span<const double> raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    SPIC_REQUIRE(std::isfinite(raw[i]), "FromModelRange: non-finite value");
    double v = std::clamp(raw[i], -1.0, 1.0);
    out[i] = std::clamp((v + 1.0) * 0.5, 0.0, 1.0);
  }
  return Image::FromPlanar(height, width, std::move(out));
}

}  // namespace spic
