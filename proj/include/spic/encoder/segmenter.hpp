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

#ifndef SPIC_ENCODER_SEGMENTER_HPP_
#define SPIC_ENCODER_SEGMENTER_HPP_

#include <array>
#include <string>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"

namespace spic {

// Produces the semantic segmentation map of an image. Implementations must be
// deterministic and return a map with the input's dimensions.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::string name() const = 0;
  virtual int num_classes() const = 0;
  virtual SegmentationMap Run(const Image& x) const = 0;
};

// Runs `seg` on `x` and validates its output. Any failure inside the
// segmenter, or an output violating the contract, is raised as
// SegmenterError.
SegmentationMap Segment(const Image& x, const Segmenter& seg);

// Returns a stored dataset annotation unchanged.
class GroundTruthSegmenter : public Segmenter {
 public:
  explicit GroundTruthSegmenter(SegmentationMap annotation)
      : annotation_(std::move(annotation)) {}
  std::string name() const override { return "groundtruth"; }
  int num_classes() const override { return annotation_.num_classes(); }
  SegmentationMap Run(const Image& x) const override;

 private:
  SegmentationMap annotation_;
};

using Rgb = std::array<double, 3>;

// Labels each pixel with the class whose reference colour is nearest in RGB
// (squared Euclidean distance, ties to the lower class index).
class ColorRuleSegmenter : public Segmenter {
 public:
  explicit ColorRuleSegmenter(std::vector<Rgb> palette);
  std::string name() const override { return "color-rule"; }
  int num_classes() const override {
    return static_cast<int>(palette_.size());
  }
  SegmentationMap Run(const Image& x) const override;
  const std::vector<Rgb>& palette() const { return palette_; }

 private:
  std::vector<Rgb> palette_;
};

}  // namespace spic

#endif  // SPIC_ENCODER_SEGMENTER_HPP_
