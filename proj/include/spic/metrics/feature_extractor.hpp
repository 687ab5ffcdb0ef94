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

#ifndef SPIC_METRICS_FEATURE_EXTRACTOR_HPP_
#define SPIC_METRICS_FEATURE_EXTRACTOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spic/core/image.hpp"
#include "spic/metrics/fid.hpp"

namespace spic {

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual Eigen::VectorXd Extract(const Image& x) const = 0;
};

// Frozen random two-layer conv net (3x3, stride 2, ReLU) followed by
// per-channel spatial mean and standard deviation pooling.
class RandomConvFeatureExtractor : public FeatureExtractor {
 public:
  explicit RandomConvFeatureExtractor(std::uint64_t seed = 0,
                                      int hidden = 16, int channels = 16);

  std::string name() const override { return "random-conv"; }
  int dim() const override { return 2 * channels_; }
  Eigen::VectorXd Extract(const Image& x) const override;

 private:
  int hidden_;
  int channels_;
  std::vector<double> w1_, b1_, w2_, b2_;
};

// Statistics of the extractor's features over a set of images.
FeatureStatistics ExtractStatistics(const FeatureExtractor& fx,
                                    const std::vector<Image>& images);

}  // namespace spic

#endif  // SPIC_METRICS_FEATURE_EXTRACTOR_HPP_
