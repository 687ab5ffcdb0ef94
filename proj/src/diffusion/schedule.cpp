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

#include "spic/diffusion/schedule.hpp"

#include <cmath>
#include <string>

namespace spic {

double NoiseSchedule::AlphaBar(int t) const {
  SPIC_REQUIRE(t >= 0 && t <= steps,
               "NoiseSchedule: timestep " + std::to_string(t) +
                   " outside [0, " + std::to_string(steps) + "]");
  return t == 0 ? 1.0 : alpha_bar[t - 1];
}

double NoiseSchedule::Beta(int t) const {
  SPIC_REQUIRE(t >= 1 && t <= steps, "NoiseSchedule: timestep out of range");
  return beta[t - 1];
}

NoiseSchedule MakeSchedule(int T, double beta_start, double beta_end) {
  SPIC_REQUIRE(T >= 1, "MakeSchedule: T must be >= 1");
  SPIC_REQUIRE(beta_start > 0 && beta_start <= beta_end && beta_end < 1,
               "MakeSchedule: need 0 < beta_start <= beta_end < 1");
  NoiseSchedule s;
  s.steps = T;
  s.beta_start = beta_start;
  s.beta_end = beta_end;
  s.beta.resize(T);
  s.alpha.resize(T);
  s.alpha_bar.resize(T);
  double prod = 1.0;
  for (int i = 0; i < T; ++i) {
    s.beta[i] = T == 1 ? beta_start
                       : beta_start + (beta_end - beta_start) * i / (T - 1);
    s.alpha[i] = 1.0 - s.beta[i];
    prod *= s.alpha[i];
    s.alpha_bar[i] = prod;
    SPIC_REQUIRE(prod > 0 && (i == 0 || prod < s.alpha_bar[i - 1]),
                 "MakeSchedule: alpha_bar underflows or stops decreasing");
  }
  return s;
}

template <typename T>
nn::Tensor<T> QSample(const nn::Tensor<T>& x0, const std::vector<int>& t,
                      const nn::Tensor<T>& eps, const NoiseSchedule& sched) {
  SPIC_REQUIRE(x0.same_shape(eps), "QSample: x0 and eps shapes differ");
  SPIC_REQUIRE(t.size() == static_cast<std::size_t>(x0.n),
               "QSample: one timestep per sample required");
  nn::Tensor<T> out(x0.n, x0.c, x0.h, x0.w);
  for (int i = 0; i < x0.n; ++i) {
    SPIC_REQUIRE(t[i] >= 1 && t[i] <= sched.steps,
                 "QSample: timestep out of range");
    const double ab = sched.AlphaBar(t[i]);
    const T a = static_cast<T>(std::sqrt(ab));
    const T b = static_cast<T>(std::sqrt(1.0 - ab));
    const T* x = x0.sample(i);
    const T* e = eps.sample(i);
    T* o = out.sample(i);
    for (std::size_t j = 0; j < x0.sample_size(); ++j) o[j] = a * x[j] + b * e[j];
  }
  return out;
}

template <typename T>
nn::Tensor<T> QSample(const nn::Tensor<T>& x0, int t, const nn::Tensor<T>& eps,
                      const NoiseSchedule& sched) {
  return QSample(x0, std::vector<int>(x0.n, t), eps, sched);
}

template nn::Tensor<float> QSample(const nn::Tensor<float>&, int,
                                   const nn::Tensor<float>&,
                                   const NoiseSchedule&);
template nn::Tensor<double> QSample(const nn::Tensor<double>&, int,
                                    const nn::Tensor<double>&,
                                    const NoiseSchedule&);
template nn::Tensor<float> QSample(const nn::Tensor<float>&,
                                   const std::vector<int>&,
                                   const nn::Tensor<float>&,
                                   const NoiseSchedule&);
template nn::Tensor<double> QSample(const nn::Tensor<double>&,
                                    const std::vector<int>&,
                                    const nn::Tensor<double>&,
                                    const NoiseSchedule&);

}  // namespace spic
