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

#ifndef SPIC_TESTS_TEST_UTIL_HPP_
#define SPIC_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"

namespace spic::testing {

inline SegmentationMap RandomMap(std::mt19937_64& rng, int h, int w, int n_c) {
  std::uniform_int_distribution<int> lab(0, n_c - 1);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(h) * w);
  for (auto& x : v) x = static_cast<std::uint8_t>(lab(rng));
  return SegmentationMap::FromLabels(h, w, n_c, std::move(v));
}

// Piecewise-constant map: random rectangles painted over a background.
inline SegmentationMap BlockyMap(std::mt19937_64& rng, int h, int w, int n_c,
                                 int rects) {
  SegmentationMap s(h, w, n_c);
  std::uniform_int_distribution<int> lab(0, n_c - 1);
  for (int r = 0; r < rects; ++r) {
    const int y0 = std::uniform_int_distribution<int>(0, h - 1)(rng);
    const int x0 = std::uniform_int_distribution<int>(0, w - 1)(rng);
    const int y1 = std::uniform_int_distribution<int>(y0, h - 1)(rng);
    const int x1 = std::uniform_int_distribution<int>(x0, w - 1)(rng);
    const auto k = static_cast<std::uint8_t>(lab(rng));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) s.set(y, x, k);
    }
  }
  return s;
}

template <class Tag>
BasicRaster<Tag> RandomRaster(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> u(Tag::kRange.lo, Tag::kRange.hi);
  std::vector<double> v(static_cast<std::size_t>(kRgbChannels) * h * w);
  for (double& x : v) x = u(rng);
  return BasicRaster<Tag>::FromPlanar(h, w, std::move(v));
}

// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("spic_test_" + tag + "_" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace spic::testing

#endif  // SPIC_TESTS_TEST_UTIL_HPP_
