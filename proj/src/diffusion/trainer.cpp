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

#include "spic/diffusion/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "spic/encoder/resample.hpp"

namespace spic {

template <typename T>
nn::Var<T> DiffusionLoss(nn::Tape<T>& tape, const nn::UNet<T>& model,
                         const NoiseSchedule& sched,
                         const TrainingBatch<T>& batch,
                         const std::vector<int>& t, const nn::Tensor<T>& eps) {
  const nn::Tensor<T>& x0 = batch.x0;
  SPIC_REQUIRE(x0.same_shape(batch.conditioning) && x0.same_shape(eps),
               "DiffusionLoss: inconsistent batch shapes");
  const nn::Tensor<T> xt = QSample(x0, t, eps, sched);
  nn::Tensor<T> input(x0.n, 6, x0.h, x0.w);
  for (int i = 0; i < x0.n; ++i) {
    std::copy(xt.sample(i), xt.sample(i) + xt.sample_size(), input.sample(i));
    std::copy(batch.conditioning.sample(i),
              batch.conditioning.sample(i) + xt.sample_size(),
              input.sample(i) + xt.sample_size());
  }
  auto pred = model.Forward(tape, nn::MakeVar(std::move(input)), t, batch.maps);
  return nn::MseLoss(tape, pred, eps);
}

template <typename T>
double TrainingStep(nn::UNet<T>& model, const NoiseSchedule& sched,
                    const TrainingBatch<T>& batch, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> step_dist(1, sched.steps);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<int> t(batch.x0.n);
  for (int& v : t) v = step_dist(rng);
  nn::Tensor<T> eps(batch.x0.n, batch.x0.c, batch.x0.h, batch.x0.w);
  for (T& v : eps.data) v = static_cast<T>(normal(rng));
  nn::Tape<T> tape;
  auto loss = DiffusionLoss(tape, model, sched, batch, t, eps);
  const double value = loss->value.data[0];
  tape.Backward(loss);
  return value;
}

template <typename T>
Adam<T>::Adam(nn::ParamStore<T>& params, double learning_rate, double beta1,
              double beta2, double eps)
    : params_(params), lr_(learning_rate), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
  for (const auto& [name, p] : params_.params()) {
    m_.emplace_back(p->value.size(), 0.0);
    v_.emplace_back(p->value.size(), 0.0);
  }
}

template <typename T>
void Adam<T>::Step(double clip_norm) {
  const auto& params = params_.params();
  double scale = 1.0;
  if (clip_norm > 0) {
    double sq = 0;
    for (const auto& [name, p] : params) {
      for (T g : p->grad.data) sq += static_cast<double>(g) * g;
    }
    const double norm = std::sqrt(sq);
    if (norm > clip_norm) scale = clip_norm / norm;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    nn::Node<T>& p = *params[k].second;
    if (p.grad.empty()) continue;
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad.data[j] * scale;
      m[j] = beta1_ * m[j] + (1 - beta1_) * g;
      v[j] = beta2_ * v[j] + (1 - beta2_) * g * g;
      p.value.data[j] -= static_cast<T>(lr_ * (m[j] / bc1) /
                                        (std::sqrt(v[j] / bc2) + eps_));
    }
  }
  params_.ZeroGrad();
}

Trainer::Trainer(nn::UNet<float>& model, const NoiseSchedule& sched,
                 const TrainConfig& cfg,
                 const std::vector<TrainingExample>& data)
    : model_(model), sched_(sched), cfg_(cfg),
      adam_(model.params(), cfg.learning_rate), rng_(cfg.seed) {
  SPIC_REQUIRE(!data.empty(), "Trainer: empty training set");
  SPIC_REQUIRE(cfg.batch_size >= 1, "Trainer: batch_size must be >= 1");
  const int mult = model.config().size_multiple();
  for (const auto& ex : data) {
    SPIC_REQUIRE(ex.ssm.height() == ex.image.height() &&
                     ex.ssm.width() == ex.image.width(),
                 "Trainer: SSM dimensions differ from image");
    SPIC_REQUIRE(ex.coarse.height() * kDownscaleFactor == ex.image.height() &&
                     ex.coarse.width() * kDownscaleFactor == ex.image.width(),
                 "Trainer: coarse dimensions inconsistent with image");
    x0_.push_back(nn::TensorFromRaster<float>(ToModelRange(ex.image)));
    cond_.push_back(nn::TensorFromRaster<float>(
        ToModelRange(UpscaleCoarse(ex.coarse))));
    maps_.push_back(ex.ssm);
  }
  const int h = cfg_.crop_height > 0 ? cfg_.crop_height : data[0].image.height();
  const int w = cfg_.crop_width > 0 ? cfg_.crop_width : data[0].image.width();
  SPIC_REQUIRE(h % mult == 0 && w % mult == 0,
               "Trainer: crop size must be a multiple of the U-Net size "
               "multiple");
  for (const auto& x : x0_) {
    SPIC_REQUIRE(x.h >= h && x.w >= w, "Trainer: crop larger than image");
  }
}

TrainingBatch<float> Trainer::DrawBatch() {
  std::uniform_int_distribution<std::size_t> pick(0, x0_.size() - 1);
  TrainingBatch<float> batch;
  std::vector<nn::Tensor<float>> xs, cs;
  for (int b = 0; b < cfg_.batch_size; ++b) {
    const std::size_t i = pick(rng_);
    const nn::Tensor<float>& x = x0_[i];
    const int h = cfg_.crop_height > 0 ? cfg_.crop_height : x.h;
    const int w = cfg_.crop_width > 0 ? cfg_.crop_width : x.w;
    const int oy = std::uniform_int_distribution<int>(0, x.h - h)(rng_);
    const int ox = std::uniform_int_distribution<int>(0, x.w - w)(rng_);
    nn::Tensor<float> xc(1, 3, h, w), cc(1, 3, h, w);
    for (int ch = 0; ch < 3; ++ch) {
      for (int y = 0; y < h; ++y) {
        for (int col = 0; col < w; ++col) {
          xc.at(0, ch, y, col) = x.at(0, ch, oy + y, ox + col);
          cc.at(0, ch, y, col) = cond_[i].at(0, ch, oy + y, ox + col);
        }
      }
    }
    const SegmentationMap& s = maps_[i];
    SegmentationMap sc(h, w, s.num_classes());
    for (int y = 0; y < h; ++y) {
      for (int col = 0; col < w; ++col) sc.set(y, col, s.at(oy + y, ox + col));
    }
    xs.push_back(std::move(xc));
    cs.push_back(std::move(cc));
    batch.maps.push_back(std::move(sc));
  }
  batch.x0 = nn::StackBatch(xs);
  batch.conditioning = nn::StackBatch(cs);
  return batch;
}

double Trainer::Step() {
  const TrainingBatch<float> batch = DrawBatch();
  const double loss = TrainingStep(model_, sched_, batch, rng_);
  adam_.Step(cfg_.grad_clip);
  losses_.push_back(loss);
  return loss;
}

void Trainer::Run(const std::function<void(int, double)>& progress) {
  for (int s = 0; s < cfg_.steps; ++s) {
    const double loss = Step();
    if (progress) progress(static_cast<int>(losses_.size()), loss);
  }
}

double SmoothedLoss(const std::vector<double>& losses, int end, int window) {
  SPIC_REQUIRE(window >= 1 && end >= window &&
                   end <= static_cast<int>(losses.size()),
               "SmoothedLoss: window outside recorded losses");
  double s = 0;
  for (int i = end - window; i < end; ++i) s += losses[i];
  return s / window;
}

template nn::Var<float> DiffusionLoss(nn::Tape<float>&, const nn::UNet<float>&,
                                      const NoiseSchedule&,
                                      const TrainingBatch<float>&,
                                      const std::vector<int>&,
                                      const nn::Tensor<float>&);
template nn::Var<double> DiffusionLoss(nn::Tape<double>&,
                                       const nn::UNet<double>&,
                                       const NoiseSchedule&,
                                       const TrainingBatch<double>&,
                                       const std::vector<int>&,
                                       const nn::Tensor<double>&);
template double TrainingStep(nn::UNet<float>&, const NoiseSchedule&,
                             const TrainingBatch<float>&, std::mt19937_64&);
template double TrainingStep(nn::UNet<double>&, const NoiseSchedule&,
                             const TrainingBatch<double>&, std::mt19937_64&);
template class Adam<float>;
template class Adam<double>;

}  // namespace spic
