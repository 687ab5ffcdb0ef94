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

#include "spic/diffusion/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "spic/encoder/resample.hpp"

namespace spic {

std::vector<int> TimestepSubsequence(int T, int steps) {
  SPIC_REQUIRE(T >= 1, "TimestepSubsequence: T must be >= 1");
  SPIC_REQUIRE(steps >= 1 && steps <= T,
               "TimestepSubsequence: steps must be in [1, T]");
  if (steps == 1) return {T};
  std::vector<int> ts(steps);
  for (int i = 0; i < steps; ++i) {
    const double v = T - static_cast<double>(T - 1) * i / (steps - 1);
    ts[i] = static_cast<int>(std::lround(v));
  }
  // Rounding cannot collide when steps <= T, but keep the contract explicit.
  for (int i = 1; i < steps; ++i) {
    if (ts[i] >= ts[i - 1]) ts[i] = ts[i - 1] - 1;
  }
  SPIC_REQUIRE(ts.back() >= 1, "TimestepSubsequence: internal spacing error");
  return ts;
}

nn::Tensor<double> UNetPredictor::PredictNoise(const nn::Tensor<double>& input,
                                               int t,
                                               const SegmentationMap& s) const {
  nn::Tape<float> tape(false);
  auto x = nn::MakeVar(input.cast<float>());
  auto eps = model_.Forward(tape, x, std::vector<int>(input.n, t),
                            std::vector<SegmentationMap>(input.n, s));
  return eps->value.cast<double>();
}

nn::Tensor<double> ConditioningTensor(const CoarseImage& c, int factor) {
  return nn::TensorFromRaster<double>(ToModelRange(UpscaleCoarse(c, factor)));
}

nn::Tensor<double> DenoiseStepInput(const nn::Tensor<double>& x_t,
                                    const nn::Tensor<double>& conditioning) {
  SPIC_REQUIRE(x_t.c == 3 && conditioning.c == 3,
               "DenoiseStepInput: both inputs must have 3 channels");
  SPIC_REQUIRE(x_t.same_shape(conditioning),
               "DenoiseStepInput: x_t " + x_t.shape_string() +
                   " does not match conditioning " +
                   conditioning.shape_string());
  nn::Tensor<double> out(x_t.n, 6, x_t.h, x_t.w);
  for (int i = 0; i < x_t.n; ++i) {
    std::copy(x_t.sample(i), x_t.sample(i) + x_t.sample_size(), out.sample(i));
    std::copy(conditioning.sample(i),
              conditioning.sample(i) + conditioning.sample_size(),
              out.sample(i) + x_t.sample_size());
  }
  return out;
}

nn::Tensor<double> DenoiseStepInput(const nn::Tensor<double>& x_t,
                                    const CoarseImage& c) {
  return DenoiseStepInput(x_t, ConditioningTensor(c));
}

nn::Tensor<double> PSampleStep(const NoisePredictor& model,
                               const NoiseSchedule& sched,
                               const nn::Tensor<double>& x_t, int t,
                               int t_prev,
                               const nn::Tensor<double>& conditioning,
                               const SegmentationMap& s, std::mt19937_64& rng,
                               bool clip_denoised) {
  SPIC_REQUIRE(t > t_prev && t_prev >= 0 && t <= sched.steps,
               "PSampleStep: need T >= t > t_prev >= 0");
  const nn::Tensor<double> eps =
      model.PredictNoise(DenoiseStepInput(x_t, conditioning), t, s);
  SPIC_REQUIRE(eps.same_shape(x_t), "PSampleStep: predictor output shape");

  const double ab_t = sched.AlphaBar(t);
  const double ab_prev = sched.AlphaBar(t_prev);
  const double a = ab_t / ab_prev;
  const double coef_x0 = std::sqrt(ab_prev) * (1.0 - a) / (1.0 - ab_t);
  const double coef_xt = std::sqrt(a) * (1.0 - ab_prev) / (1.0 - ab_t);
  const double sigma =
      std::sqrt(std::max(0.0, (1.0 - ab_prev) / (1.0 - ab_t) * (1.0 - a)));
  const double inv_sqrt_ab = 1.0 / std::sqrt(ab_t);
  const double sqrt_one_minus_ab = std::sqrt(1.0 - ab_t);

  nn::Tensor<double> out(x_t.n, x_t.c, x_t.h, x_t.w);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    double x0 = (x_t.data[j] - sqrt_one_minus_ab * eps.data[j]) * inv_sqrt_ab;
    if (clip_denoised) x0 = std::clamp(x0, -1.0, 1.0);
    double v = coef_x0 * x0 + coef_xt * x_t.data[j];
    if (t_prev > 0) v += sigma * normal(rng);
    out.data[j] = v;
  }
  return out;
}

Image Sample(const NoisePredictor& model, const NoiseSchedule& sched,
             const CoarseImage& c, const SegmentationMap& s,
             const SamplerConfig& cfg) {
  const nn::Tensor<double> cond = ConditioningTensor(c);
  SPIC_REQUIRE(s.height() == cond.h && s.width() == cond.w,
               "Sample: segmentation map does not match upscaled coarse size");
  const std::vector<int> ts = TimestepSubsequence(sched.steps, cfg.steps);
  std::mt19937_64 rng(cfg.seed);
  nn::Tensor<double> x = cond;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const int t_prev = i + 1 < ts.size() ? ts[i + 1] : 0;
    x = PSampleStep(model, sched, x, ts[i], t_prev, cond, s, rng,
                    cfg.clip_denoised);
  }
  return FromModelRange(x.h, x.w, x.data);
}

}  // namespace spic
