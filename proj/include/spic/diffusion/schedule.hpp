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

#ifndef SPIC_DIFFUSION_SCHEDULE_HPP_
#define SPIC_DIFFUSION_SCHEDULE_HPP_

#include <vector>

#include "spic/diffusion/tensor.hpp"

namespace spic {

// Variance schedule of the forward noising process. Timesteps are 1-based:
// step t uses beta[t - 1]; alpha_bar at t = 0 is taken as 1.
struct NoiseSchedule {
  int steps = 0;  // T
  double beta_start = 0;
  double beta_end = 0;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;

  double AlphaBar(int t) const;
  double Beta(int t) const;
};

// Linearly spaced betas from beta_start to beta_end over T steps (beta_start
// alone when T == 1). Requires 0 < beta_start <= beta_end < 1 and T >= 1.
NoiseSchedule MakeSchedule(int T = 1000, double beta_start = 1e-4,
                           double beta_end = 0.02);

// sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * eps.
template <typename T>
nn::Tensor<T> QSample(const nn::Tensor<T>& x0, int t, const nn::Tensor<T>& eps,
                      const NoiseSchedule& sched);

// Batched variant with one timestep per sample.
template <typename T>
nn::Tensor<T> QSample(const nn::Tensor<T>& x0, const std::vector<int>& t,
                      const nn::Tensor<T>& eps, const NoiseSchedule& sched);

}  // namespace spic

#endif  // SPIC_DIFFUSION_SCHEDULE_HPP_
