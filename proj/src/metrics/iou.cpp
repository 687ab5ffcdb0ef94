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

#include "spic/metrics/iou.hpp"

#include "spic/core/error.hpp"

namespace spic {

ConfusionAccumulator::ConfusionAccumulator(int num_classes)
    : intersection_(num_classes, 0), union_(num_classes, 0) {
  SPIC_REQUIRE(num_classes >= 1 && num_classes <= SegmentationMap::kMaxClasses,
               "ConfusionAccumulator: num_classes out of range");
}

void ConfusionAccumulator::Accumulate(const SegmentationMap& s1,
                                      const SegmentationMap& s2) {
  SPIC_REQUIRE(s1.height() == s2.height() && s1.width() == s2.width(),
               "IoU: segmentation maps differ in size");
  SPIC_REQUIRE(s1.num_classes() == num_classes() &&
                   s2.num_classes() == num_classes(),
               "IoU: class count mismatch");
  const auto& a = s1.labels();
  const auto& b = s2.labels();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++union_[a[i]];
    if (a[i] == b[i]) {
      ++intersection_[a[i]];
    } else {
      ++union_[b[i]];
    }
  }
}

void ConfusionAccumulator::Merge(const ConfusionAccumulator& other) {
  SPIC_REQUIRE(other.num_classes() == num_classes(),
               "ConfusionAccumulator: class count mismatch");
  for (int k = 0; k < num_classes(); ++k) {
    intersection_[k] += other.intersection_[k];
    union_[k] += other.union_[k];
  }
}

std::optional<double> ConfusionAccumulator::Iou(int k) const {
  SPIC_REQUIRE(k >= 0 && k < num_classes(), "IoU: class index out of range");
  if (union_[k] == 0) return std::nullopt;
  return static_cast<double>(intersection_[k]) /
         static_cast<double>(union_[k]);
}

double ConfusionAccumulator::Miou() const {
  double sum = 0;
  int count = 0;
  for (int k = 0; k < num_classes(); ++k) {
    if (const auto v = Iou(k)) {
      sum += *v;
      ++count;
    }
  }
  SPIC_REQUIRE(count > 0, "mIoU: no class present in either map");
  return sum / count;
}

std::optional<double> IouClass(const SegmentationMap& s1,
                               const SegmentationMap& s2, int k) {
  ConfusionAccumulator acc(s1.num_classes());
  acc.Accumulate(s1, s2);
  return acc.Iou(k);
}

double Miou(const SegmentationMap& s1, const SegmentationMap& s2) {
  ConfusionAccumulator acc(s1.num_classes());
  acc.Accumulate(s1, s2);
  return acc.Miou();
}

}  // namespace spic
