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

#ifndef SPIC_DIFFUSION_TRAINER_HPP_
#define SPIC_DIFFUSION_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"
#include "spic/diffusion/schedule.hpp"
#include "spic/diffusion/unet.hpp"

namespace spic {

// One training triple. `coarse` is the decoded (degraded) coarse image, the
// same signal the receiver conditions on.
struct TrainingExample {
  Image image;
  CoarseImage coarse;
  SegmentationMap ssm;
};

// Model-range tensors for a batch.
template <typename T>
struct TrainingBatch {
  nn::Tensor<T> x0;            // [N, 3, H, W]
  nn::Tensor<T> conditioning;  // [N, 3, H, W]
  std::vector<SegmentationMap> maps;
};

// eps-prediction loss for fixed timesteps and noise:
//   mean || eps - model([q_sample(x0, t, eps), conditioning], t, s) ||^2
template <typename T>
nn::Var<T> DiffusionLoss(nn::Tape<T>& tape, const nn::UNet<T>& model,
                         const NoiseSchedule& sched,
                         const TrainingBatch<T>& batch,
                         const std::vector<int>& t, const nn::Tensor<T>& eps);

// Draws t ~ U{1..T} per sample and unit Gaussian eps, evaluates the loss and
// back-propagates into the model's parameter gradients. Returns the loss.
template <typename T>
double TrainingStep(nn::UNet<T>& model, const NoiseSchedule& sched,
                    const TrainingBatch<T>& batch, std::mt19937_64& rng);

template <typename T>
class Adam {
 public:
  Adam(nn::ParamStore<T>& params, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);
  // Applies accumulated gradients (after optional global-norm clipping) and
  // clears them. Parameters without a gradient are left untouched.
  void Step(double clip_norm = 0.0);

 private:
  nn::ParamStore<T>& params_;
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct TrainConfig {
  int steps = 2000;
  int batch_size = 4;
  double learning_rate = 1e-3;
  // Random crops of this size (0 = full image); multiples of the U-Net size
  // multiple.
  int crop_height = 0;
  int crop_width = 0;
  double grad_clip = 1.0;
  std::uint64_t seed = 0;
  // Coarse-codec quality used to build the decoded conditioning images.
  int coarse_quality = 30;
};

// Single-stream trainer over an in-memory training set.
class Trainer {
 public:
  Trainer(nn::UNet<float>& model, const NoiseSchedule& sched,
          const TrainConfig& cfg, const std::vector<TrainingExample>& data);

  // One optimizer update on a random batch; returns its loss.
  double Step();
  // Runs cfg.steps updates, invoking `progress(step, loss)` after each.
  void Run(const std::function<void(int, double)>& progress = {});
  const std::vector<double>& losses() const { return losses_; }

 private:
  TrainingBatch<float> DrawBatch();

  nn::UNet<float>& model_;
  NoiseSchedule sched_;
  TrainConfig cfg_;
  std::vector<nn::Tensor<float>> x0_;
  std::vector<nn::Tensor<float>> cond_;
  std::vector<SegmentationMap> maps_;
  Adam<float> adam_;
  std::mt19937_64 rng_;
  std::vector<double> losses_;
};

// Mean of losses[end - window, end), with end a 1-based step count.
double SmoothedLoss(const std::vector<double>& losses, int end, int window);

}  // namespace spic

#endif  // SPIC_DIFFUSION_TRAINER_HPP_
