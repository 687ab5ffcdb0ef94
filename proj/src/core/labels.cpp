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

#include "spic/core/labels.hpp"

#include <algorithm>
#include <string>

#include "spic/core/error.hpp"

namespace spic {

SegmentationMap::SegmentationMap(int height, int width, int num_classes,
                                 std::uint8_t fill)
    : height_(height), width_(width), num_classes_(num_classes) {
  SPIC_REQUIRE(height > 0 && width > 0,
               "SegmentationMap: dimensions must be positive");
  SPIC_REQUIRE(num_classes >= 1 && num_classes <= kMaxClasses,
               "SegmentationMap: num_classes must be in [1, 255]");
  SPIC_REQUIRE(fill < num_classes, "SegmentationMap: fill label >= n_c");
  labels_.assign(static_cast<std::size_t>(height) * width, fill);
}

SegmentationMap SegmentationMap::FromLabels(int height, int width,
                                            int num_classes,
                                            std::vector<std::uint8_t> labels) {
  SegmentationMap s(height, width, num_classes);
  SPIC_REQUIRE(labels.size() == s.labels_.size(),
               "SegmentationMap: label buffer size mismatch");
  for (std::uint8_t l : labels) {
    if (l >= num_classes) {
      internal::ThrowInvalid("SegmentationMap: label " + std::to_string(l) +
                             " >= n_c " + std::to_string(num_classes));
    }
  }
  s.labels_ = std::move(labels);
  return s;
}

void SegmentationMap::set(int y, int x, std::uint8_t label) {
  SPIC_REQUIRE(label < num_classes_, "SegmentationMap: label >= n_c");
  labels_[static_cast<std::size_t>(y) * width_ + x] = label;
}

OneHotMap OneHot(const SegmentationMap& s) {
  OneHotMap m;
  m.height_ = s.height();
  m.width_ = s.width();
  m.num_classes_ = s.num_classes();
  const std::size_t plane = s.size();
  m.planes_.assign(plane * s.num_classes(), 0);
  auto labels = s.labels();
  for (std::size_t i = 0; i < plane; ++i) {
    m.planes_[labels[i] * plane + i] = 1;
  }
  return m;
}

SegmentationMap ArgMax(const OneHotMap& one_hot) {
  const int h = one_hot.height();
  const int w = one_hot.width();
  SegmentationMap s(h, w, one_hot.num_classes());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int hits = 0;
      for (int k = 0; k < one_hot.num_classes(); ++k) {
        if (one_hot.at(k, y, x)) {
          s.set(y, x, static_cast<std::uint8_t>(k));
          ++hits;
        }
      }
      SPIC_REQUIRE(hits == 1, "ArgMax: pixel without exactly one active plane");
    }
  }
  return s;
}

int NearestSourceIndex(int dst, int dst_size, int src_size) {
  // floor((dst + 0.5) * src / dst_size) in exact integer arithmetic.
  const long long num = (2LL * dst + 1) * src_size;
  const int idx = static_cast<int>(num / (2LL * dst_size));
  return std::min(idx, src_size - 1);
}

SegmentationMap ResizeLabelsNearest(const SegmentationMap& s, int height,
                                    int width) {
  SPIC_REQUIRE(height >= 1 && width >= 1,
               "ResizeLabelsNearest: target dimensions must be >= 1");
  SegmentationMap out(height, width, s.num_classes());
  for (int y = 0; y < height; ++y) {
    const int sy = NearestSourceIndex(y, height, s.height());
    for (int x = 0; x < width; ++x) {
      out.set(y, x, s.at(sy, NearestSourceIndex(x, width, s.width())));
    }
  }
  return out;
}

}  // namespace spic
