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

#include "spic/encoder/segmenter.hpp"

#include <exception>

namespace spic {

SegmentationMap Segment(const Image& x, const Segmenter& seg) {
  SegmentationMap s;
  try {
    s = seg.Run(x);
  } catch (const SegmenterError&) {
    throw;
  } catch (const std::exception& e) {
    throw SegmenterError("segmenter '" + seg.name() + "' failed: " + e.what());
  }
  if (s.height() != x.height() || s.width() != x.width()) {
    throw SegmenterError("segmenter '" + seg.name() +
                         "' returned a map with wrong dimensions");
  }
  if (s.num_classes() != seg.num_classes()) {
    throw SegmenterError("segmenter '" + seg.name() +
                         "' returned a map with inconsistent n_c");
  }
  return s;
}

SegmentationMap GroundTruthSegmenter::Run(const Image& x) const {
  if (x.height() != annotation_.height() || x.width() != annotation_.width()) {
    throw SegmenterError("annotation dimensions do not match image");
  }
  return annotation_;
}

ColorRuleSegmenter::ColorRuleSegmenter(std::vector<Rgb> palette)
    : palette_(std::move(palette)) {
  SPIC_REQUIRE(!palette_.empty() &&
                   palette_.size() <=
                       static_cast<std::size_t>(SegmentationMap::kMaxClasses),
               "ColorRuleSegmenter: palette size must be in [1, 255]");
}

SegmentationMap ColorRuleSegmenter::Run(const Image& x) const {
  const int n = num_classes();
  SegmentationMap s(x.height(), x.width(), n);
  for (int y = 0; y < x.height(); ++y) {
    for (int col = 0; col < x.width(); ++col) {
      const double r = x.at(0, y, col), g = x.at(1, y, col),
                   b = x.at(2, y, col);
      int best = 0;
      double best_d = 1e300;
      for (int k = 0; k < n; ++k) {
        const Rgb& p = palette_[k];
        const double d = (r - p[0]) * (r - p[0]) + (g - p[1]) * (g - p[1]) +
                         (b - p[2]) * (b - p[2]);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      s.set(y, col, static_cast<std::uint8_t>(best));
    }
  }
  return s;
}

}  // namespace spic
