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

#ifndef SPIC_BENCH_SYNTHETIC_HPP_
#define SPIC_BENCH_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"
#include "spic/encoder/segmenter.hpp"

namespace spic {

// Street-scene-like shapes: sky band, road, vegetation and buildings on the
// horizon, cars on the road. Each class has a distinct colour with mild
// texture, so the colour-rule segmenter recovers the labels exactly.
struct SyntheticConfig {
  int height = 64;
  int width = 128;
  int num_classes = 5;  // 3..5
  std::uint64_t seed = 0;
  double texture = 0.05;
};

struct SyntheticSample {
  Image image;
  SegmentationMap labels;
};

// Class colours for `num_classes` classes.
std::vector<Rgb> SyntheticPalette(int num_classes);
ColorRuleSegmenter SyntheticSegmenter(int num_classes);

// Sample `index` of the corpus defined by cfg; independent of other indices.
SyntheticSample GenerateSynthetic(const SyntheticConfig& cfg, int index);

// Writes `<root>/<split>/images/<id>.png` and `<root>/<split>/labels/<id>.png`
// for indices [first, first + count).
void WriteSyntheticSplit(const std::filesystem::path& root,
                         const std::string& split, const SyntheticConfig& cfg,
                         int first, int count);

}  // namespace spic

#endif  // SPIC_BENCH_SYNTHETIC_HPP_
