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

#ifndef SPIC_DIFFUSION_SAMPLER_HPP_
#define SPIC_DIFFUSION_SAMPLER_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"
#include "spic/diffusion/schedule.hpp"
#include "spic/diffusion/unet.hpp"

namespace spic {

struct SamplerConfig {
  int steps = 20;
  std::uint64_t seed = 0;
  // Clamp the x0 estimate to [-1, 1] before the posterior update.
  bool clip_denoised = true;
};

// `steps` timesteps evenly spaced from T down to 1, rounded to integers and
// strictly decreasing. A single step uses {T}.
std::vector<int> TimestepSubsequence(int T, int steps);

// eps-prediction interface consumed by the sampler. Inputs are
// [1, 6, H, W] tensors in model range.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual nn::Tensor<double> PredictNoise(const nn::Tensor<double>& input,
                                          int t,
                                          const SegmentationMap& s) const = 0;
};

// Runs a float U-Net without recording a tape. Safe to share across threads.
class UNetPredictor : public NoisePredictor {
 public:
  explicit UNetPredictor(const nn::UNet<float>& model) : model_(model) {}
  nn::Tensor<double> PredictNoise(const nn::Tensor<double>& input, int t,
                                  const SegmentationMap& s) const override;

 private:
  const nn::UNet<float>& model_;
};

// to_model_range(upscale_coarse(c)) as a [1, 3, H, W] tensor.
nn::Tensor<double> ConditioningTensor(const CoarseImage& c,
                                      int factor = kDownscaleFactor);

// Channels 0-2 are x_t, channels 3-5 the conditioning tensor.
nn::Tensor<double> DenoiseStepInput(const nn::Tensor<double>& x_t,
                                    const nn::Tensor<double>& conditioning);
nn::Tensor<double> DenoiseStepInput(const nn::Tensor<double>& x_t,
                                    const CoarseImage& c);

// One reverse update from t to t_prev < t on an arbitrary subsequence:
//   x0_hat = (x_t - sqrt(1 - ab_t) eps) / sqrt(ab_t)
//   mean   = sqrt(ab_prev) (1 - a) / (1 - ab_t) x0_hat
//          + sqrt(a) (1 - ab_prev) / (1 - ab_t) x_t,   a = ab_t / ab_prev
//   var    = (1 - ab_prev) / (1 - ab_t) (1 - a)
// Noise is added only when t_prev > 0, so the final step returns x0_hat.
nn::Tensor<double> PSampleStep(const NoisePredictor& model,
                               const NoiseSchedule& sched,
                               const nn::Tensor<double>& x_t, int t,
                               int t_prev,
                               const nn::Tensor<double>& conditioning,
                               const SegmentationMap& s, std::mt19937_64& rng,
                               bool clip_denoised = true);

// Coarse-initialized reverse chain: the estimate starts as the conditioning
// tensor itself (no added noise) at the first subsequence timestep and is
// refined over cfg.steps updates. Deterministic for a fixed seed.
Image Sample(const NoisePredictor& model, const NoiseSchedule& sched,
             const CoarseImage& c, const SegmentationMap& s,
             const SamplerConfig& cfg);

}  // namespace spic

#endif  // SPIC_DIFFUSION_SAMPLER_HPP_
