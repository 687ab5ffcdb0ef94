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

#ifndef SPIC_CORE_LABELS_HPP_
#define SPIC_CORE_LABELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace spic {

// Per-pixel class labels in [0, num_classes), row-major.
class SegmentationMap {
 public:
  static constexpr int kMaxClasses = 255;

  SegmentationMap() = default;
  SegmentationMap(int height, int width, int num_classes,
                  std::uint8_t fill = 0);
  static SegmentationMap FromLabels(int height, int width, int num_classes,
                                    std::vector<std::uint8_t> labels);

  int height() const { return height_; }
  int width() const { return width_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return labels_.size(); }

  std::uint8_t at(int y, int x) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int y, int x, std::uint8_t label);
  std::span<const std::uint8_t> labels() const { return labels_; }

  bool operator==(const SegmentationMap&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int num_classes_ = 0;
  std::vector<std::uint8_t> labels_;
};

// num_classes indicator planes, plane-major: value(k, y, x) is 1 iff the
// source label at (y, x) equals k.
class OneHotMap {
 public:
  int height() const { return height_; }
  int width() const { return width_; }
  int num_classes() const { return num_classes_; }
  std::uint8_t at(int k, int y, int x) const {
    return planes_[(static_cast<std::size_t>(k) * height_ + y) * width_ + x];
  }
  std::span<const std::uint8_t> planes() const { return planes_; }

 private:
  friend OneHotMap OneHot(const SegmentationMap& s);
  int height_ = 0;
  int width_ = 0;
  int num_classes_ = 0;
  std::vector<std::uint8_t> planes_;
};

OneHotMap OneHot(const SegmentationMap& s);

// Inverse of OneHot. Rejects planes that are not a partition of unity.
SegmentationMap ArgMax(const OneHotMap& one_hot);

// Source index for destination index `dst` when resampling a 1-D axis of
// length src_size to dst_size with nearest-neighbour at pixel centres.
int NearestSourceIndex(int dst, int dst_size, int src_size);

SegmentationMap ResizeLabelsNearest(const SegmentationMap& s, int height,
                                    int width);

}  // namespace spic

#endif  // SPIC_CORE_LABELS_HPP_
