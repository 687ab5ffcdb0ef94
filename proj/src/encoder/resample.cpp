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

#include "spic/encoder/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace spic {
namespace {

struct Tap {
  int i0;
  int i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> BilinearTaps(int dst_size, int src_size, int factor) {
  std::vector<Tap> taps(dst_size);
  for (int d = 0; d < dst_size; ++d) {
    double s = (d + 0.5) / factor - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_size - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_size - 1);
    taps[d] = {i0, i1, s - i0};
  }
  return taps;
}

}  // namespace

CoarseImage DownscaleAverage(const Image& x, int factor) {
  SPIC_REQUIRE(factor >= 1, "DownscaleAverage: factor must be >= 1");
  if (x.height() % factor != 0 || x.width() % factor != 0) {
    internal::ThrowInvalid("DownscaleAverage: image " +
                           std::to_string(x.height()) + "x" +
                           std::to_string(x.width()) +
                           " is not divisible by factor " +
                           std::to_string(factor));
  }
  const int h = x.height() / factor;
  const int w = x.width() / factor;
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  std::vector<double> out(static_cast<std::size_t>(3) * h * w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int col = 0; col < w; ++col) {
        double sum = 0.0;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            sum += x.at(c, y * factor + dy, col * factor + dx);
          }
        }
        out[(static_cast<std::size_t>(c) * h + y) * w + col] =
            std::clamp(sum * inv, 0.0, 1.0);
      }
    }
  }
  return CoarseImage::FromPlanar(h, w, std::move(out));
}

Image UpscaleCoarse(const CoarseImage& c, int factor) {
  SPIC_REQUIRE(factor >= 1, "UpscaleCoarse: factor must be >= 1");
  const int h = c.height() * factor;
  const int w = c.width() * factor;
  const auto ty = BilinearTaps(h, c.height(), factor);
  const auto tx = BilinearTaps(w, c.width(), factor);
  std::vector<double> out(static_cast<std::size_t>(3) * h * w);
  for (int ch = 0; ch < 3; ++ch) {
    for (int y = 0; y < h; ++y) {
      const Tap& a = ty[y];
      for (int x = 0; x < w; ++x) {
        const Tap& b = tx[x];
        const double top =
            c.at(ch, a.i0, b.i0) * (1 - b.w1) + c.at(ch, a.i0, b.i1) * b.w1;
        const double bot =
            c.at(ch, a.i1, b.i0) * (1 - b.w1) + c.at(ch, a.i1, b.i1) * b.w1;
        out[(static_cast<std::size_t>(ch) * h + y) * w + x] =
            std::clamp(top * (1 - a.w1) + bot * a.w1, 0.0, 1.0);
      }
    }
  }
  return Image::FromPlanar(h, w, std::move(out));
}

}  // namespace spic
