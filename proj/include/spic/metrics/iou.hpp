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

#ifndef SPIC_METRICS_IOU_HPP_
#define SPIC_METRICS_IOU_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "spic/core/labels.hpp"

namespace spic {

// |{s1 = k} n {s2 = k}| / |{s1 = k} u {s2 = k}|; nullopt when the union is
// empty.
std::optional<double> IouClass(const SegmentationMap& s1,
                               const SegmentationMap& s2, int k);

// Mean IoU over the classes whose union is non-empty. Throws InvalidArgument
// when no class qualifies.
double Miou(const SegmentationMap& s1, const SegmentationMap& s2);

// Per-class intersection and union counts, additive across image pairs.
class ConfusionAccumulator {
 public:
  explicit ConfusionAccumulator(int num_classes);

  void Accumulate(const SegmentationMap& s1, const SegmentationMap& s2);
  void Merge(const ConfusionAccumulator& other);

  int num_classes() const { return static_cast<int>(intersection_.size()); }
  const std::vector<std::uint64_t>& intersection() const {
    return intersection_;
  }
  const std::vector<std::uint64_t>& union_counts() const { return union_; }
  std::optional<double> Iou(int k) const;
  double Miou() const;
  bool operator==(const ConfusionAccumulator&) const = default;

 private:
  std::vector<std::uint64_t> intersection_;
  std::vector<std::uint64_t> union_;
};

}  // namespace spic

#endif  // SPIC_METRICS_IOU_HPP_
