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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spic/core/error.hpp"
#include "spic/core/image.hpp"
#include "spic/diffusion/checkpoint.hpp"
#include "spic/diffusion/config.hpp"
#include "spic/diffusion/sampler.hpp"
#include "spic/diffusion/schedule.hpp"
#include "spic/diffusion/trainer.hpp"
#include "spic/diffusion/unet.hpp"
#include "spic/encoder/resample.hpp"
#include "test_util.hpp"

namespace spic {
namespace {

using nn::Tensor;
using testing::RandomMap;
using testing::RandomRaster;

DenoiserConfig TinyConfig() {
  DenoiserConfig cfg;
  cfg.base_channels = 4;
  cfg.channel_mult = {1, 2};
  cfg.num_res_blocks = 1;
  cfg.attention_levels = {1};
  cfg.norm_groups = 2;
  cfg.spade_hidden = 4;
  cfg.num_classes = 3;
  cfg.zero_init_output = false;
  return cfg;
}

template <typename T>
Tensor<T> Gaussian(std::mt19937_64& rng, int n, int c, int h, int w,
                   double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Tensor<T> t(n, c, h, w);
  for (T& v : t.data) v = static_cast<T>(g(rng));
  return t;
}

template <typename T>
Tensor<T> Uniform(std::mt19937_64& rng, int n, int c, int h, int w) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor<T> t(n, c, h, w);
  for (T& v : t.data) v = static_cast<T>(u(rng));
  return t;
}

template <typename T>
TrainingBatch<T> RandomBatch(std::mt19937_64& rng, int n, int h, int w,
                             int n_c) {
  TrainingBatch<T> b;
  b.x0 = Uniform<T>(rng, n, 3, h, w);
  b.conditioning = Uniform<T>(rng, n, 3, h, w);
  for (int i = 0; i < n; ++i) b.maps.push_back(RandomMap(rng, h, w, n_c));
  return b;
}

// ---- Schedule ----

TEST(ScheduleTest, SingleStep) {
  const NoiseSchedule s = MakeSchedule(1, 0.5, 0.5);
  ASSERT_EQ(s.alpha_bar.size(), 1u);
  EXPECT_DOUBLE_EQ(s.AlphaBar(1), 0.5);
  EXPECT_DOUBLE_EQ(s.AlphaBar(0), 1.0);
}

TEST(ScheduleTest, MatchesLongDoubleProduct) {
  const NoiseSchedule s = MakeSchedule();
  for (int t : {1, 2, 10, 250, 500, 999, 1000}) {
    const double want =
        static_cast<double>(oracle::LinearAlphaBar(1000, 1e-4L, 0.02L, t));
    EXPECT_NEAR(s.AlphaBar(t), want, 1e-12 * want + 1e-15) << "t=" << t;
    EXPECT_EQ(oracle::Significant(s.AlphaBar(t), 3),
              oracle::Significant(want, 3));
  }
  EXPECT_EQ(oracle::Significant(s.AlphaBar(1000), 2), 4.0e-5);
  EXPECT_DOUBLE_EQ(s.Beta(1), 1e-4);
  EXPECT_DOUBLE_EQ(s.Beta(1000), 0.02);
}

TEST(ScheduleTest, StrictlyDecreasing) {
  const NoiseSchedule s = MakeSchedule();
  for (int t = 1; t <= 1000; ++t) {
    EXPECT_LT(s.AlphaBar(t), s.AlphaBar(t - 1));
    EXPECT_GT(s.AlphaBar(t), 0.0);
  }
}

TEST(ScheduleTest, RejectsInvalidRanges) {
  EXPECT_THROW(MakeSchedule(0), InvalidArgument);
  EXPECT_THROW(MakeSchedule(10, 0.0, 0.02), InvalidArgument);
  EXPECT_THROW(MakeSchedule(10, 0.03, 0.02), InvalidArgument);
  EXPECT_THROW(MakeSchedule(10, 1e-4, 1.0), InvalidArgument);
  const NoiseSchedule s = MakeSchedule(10);
  EXPECT_THROW(s.AlphaBar(11), InvalidArgument);
  EXPECT_THROW(s.Beta(0), InvalidArgument);
}

TEST(QSampleTest, Limits) {
  const NoiseSchedule s = MakeSchedule();
  std::mt19937_64 rng(1);
  const Tensor<double> x0 = Uniform<double>(rng, 1, 3, 4, 4);
  const Tensor<double> eps = Gaussian<double>(rng, 1, 3, 4, 4);
  const Tensor<double> zero(1, 3, 4, 4);
  const Tensor<double> a = QSample(x0, 1, zero, s);
  const Tensor<double> b = QSample(zero, 1000, eps, s);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    EXPECT_NEAR(a.data[i], std::sqrt(s.AlphaBar(1)) * x0.data[i], 1e-15);
    EXPECT_NEAR(b.data[i], std::sqrt(1 - s.AlphaBar(1000)) * eps.data[i],
                1e-15);
  }
  const Tensor<double> batch = nn::StackBatch<double>({x0, x0});
  const Tensor<double> e2 = nn::StackBatch<double>({eps, eps});
  const Tensor<double> q = QSample(batch, std::vector<int>{5, 700}, e2, s);
  const Tensor<double> q1 = QSample(x0, 5, eps, s);
  const Tensor<double> q2 = QSample(x0, 700, eps, s);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    EXPECT_EQ(q.data[i], q1.data[i]);
    EXPECT_EQ(q.data[x0.size() + i], q2.data[i]);
  }
}

TEST(QSampleTest, MonteCarloMoments) {
  const NoiseSchedule s = MakeSchedule();
  std::mt19937_64 rng(3);
  const int n = 10000;
  Tensor<double> x0(1, 1, 100, 100, 0.3);
  for (int t : {1, 100, 500, 1000}) {
    const Tensor<double> eps = Gaussian<double>(rng, 1, 1, 100, 100);
    const Tensor<double> x = QSample(x0, t, eps, s);
    double mean = 0;
    for (double v : x.data) mean += v;
    mean /= n;
    double var = 0;
    for (double v : x.data) var += (v - mean) * (v - mean);
    var /= n - 1;
    const double want_mean = std::sqrt(s.AlphaBar(t)) * 0.3;
    const double want_var = 1 - s.AlphaBar(t);
    EXPECT_LT(std::abs(mean - want_mean), 3 * std::sqrt(want_var / n));
    EXPECT_LT(std::abs(var - want_var),
              3 * want_var * std::sqrt(2.0 / (n - 1)));
  }
}

// ---- SPADE ----

// Plain group normalization, written out directly.
Tensor<double> HandGroupNorm(const Tensor<double>& x, int groups) {
  Tensor<double> out = x;
  const int cg = x.c / groups;
  for (int n = 0; n < x.n; ++n) {
    for (int g = 0; g < groups; ++g) {
      double sum = 0, sq = 0;
      const int count = cg * x.h * x.w;
      for (int c = g * cg; c < (g + 1) * cg; ++c)
        for (int y = 0; y < x.h; ++y)
          for (int xx = 0; xx < x.w; ++xx) sum += x.at(n, c, y, xx);
      const double mean = sum / count;
      for (int c = g * cg; c < (g + 1) * cg; ++c)
        for (int y = 0; y < x.h; ++y)
          for (int xx = 0; xx < x.w; ++xx)
            sq += (x.at(n, c, y, xx) - mean) * (x.at(n, c, y, xx) - mean);
      const double inv = 1 / std::sqrt(sq / count + 1e-5);
      for (int c = g * cg; c < (g + 1) * cg; ++c)
        for (int y = 0; y < x.h; ++y)
          for (int xx = 0; xx < x.w; ++xx)
            out.at(n, c, y, xx) = (x.at(n, c, y, xx) - mean) * inv;
    }
  }
  return out;
}

TEST(SpadeTest, ZeroModulationReducesToGroupNorm) {
  nn::ParamStore<double> store(3);
  nn::SpadeNorm<double> spade(store, "spade", 4, 2, 3, 5);
  for (auto* conv : {&spade.gamma, &spade.beta}) {
    std::fill(conv->weight->value.data.begin(), conv->weight->value.data.end(),
              0.0);
    std::fill(conv->bias->value.data.begin(), conv->bias->value.data.end(),
              0.0);
  }
  std::mt19937_64 rng(4);
  const Tensor<double> x = Gaussian<double>(rng, 2, 4, 6, 6, 2.0);
  const std::vector<SegmentationMap> maps = {RandomMap(rng, 6, 6, 3),
                                             RandomMap(rng, 6, 6, 3)};
  nn::Tape<double> tape(false);
  const auto y = spade(tape, nn::MakeVar(x),
                       nn::MakeVar(nn::OneHotBatch<double>(maps, 6, 6)));
  const Tensor<double> want = HandGroupNorm(x, 2);
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(y->value.data[i], want.data[i], 1e-6);
  }
}

TEST(SpadeTest, SingleClassGivesConstantModulation) {
  nn::ParamStore<double> store(5);
  nn::SpadeNorm<double> spade(store, "spade", 4, 2, 3, 5);
  const std::vector<SegmentationMap> maps = {SegmentationMap(8, 8, 3, 2)};
  nn::Tape<double> tape(false);
  const auto [gamma, beta] =
      spade.ModulationMaps(tape, nn::MakeVar(nn::OneHotBatch<double>(maps, 8, 8)));
  for (const auto* m : {&gamma->value, &beta->value}) {
    for (int c = 0; c < m->c; ++c) {
      for (int y = 0; y < m->h; ++y) {
        for (int x = 0; x < m->w; ++x) {
          EXPECT_DOUBLE_EQ(m->at(0, c, y, x), m->at(0, c, 0, 0));
        }
      }
    }
  }
}

TEST(SpadeTest, EqualNeighbourhoodsGetEqualModulation) {
  nn::ParamStore<double> store(6);
  nn::SpadeNorm<double> spade(store, "spade", 4, 2, 3, 5);
  // Left half class 0, right half class 1. Pixels whose 5x5 neighbourhood is
  // a single class must see the same modulation.
  SegmentationMap s(8, 12, 3, 0);
  for (int y = 0; y < 8; ++y)
    for (int x = 6; x < 12; ++x) s.set(y, x, 1);
  nn::Tape<double> tape(false);
  const auto [gamma, beta] = spade.ModulationMaps(
      tape, nn::MakeVar(nn::OneHotBatch<double>({s}, 8, 12)));
  for (int c = 0; c < gamma->value.c; ++c) {
    EXPECT_DOUBLE_EQ(gamma->value.at(0, c, 3, 0), gamma->value.at(0, c, 5, 2));
    EXPECT_DOUBLE_EQ(gamma->value.at(0, c, 3, 10), gamma->value.at(0, c, 6, 11));
    EXPECT_DOUBLE_EQ(beta->value.at(0, c, 0, 1), beta->value.at(0, c, 7, 3));
  }
  double diff = 0;
  for (int c = 0; c < gamma->value.c; ++c)
    diff += std::abs(gamma->value.at(0, c, 3, 1) - gamma->value.at(0, c, 3, 10));
  EXPECT_GT(diff, 0.0);
}

// ---- U-Net ----

TEST(UNetTest, OutputShapeAndSpadeCount) {
  const DenoiserConfig cfg = TinyConfig();
  nn::UNet<double> model(cfg);
  std::mt19937_64 rng(7);
  nn::Tape<double> tape(false);
  const auto y = model.Forward(
      tape, nn::MakeVar(Uniform<double>(rng, 2, 6, 8, 12)), {3, 900},
      {RandomMap(rng, 8, 12, 3), RandomMap(rng, 8, 12, 3)});
  EXPECT_EQ(y->value.n, 2);
  EXPECT_EQ(y->value.c, 3);
  EXPECT_EQ(y->value.h, 8);
  EXPECT_EQ(y->value.w, 12);
  EXPECT_EQ(model.SpadeLayers().size(),
            static_cast<std::size_t>(
                2 * (2 + cfg.levels() * (cfg.num_res_blocks + 1))));
}

TEST(UNetTest, ZeroInitHeadPredictsZero) {
  DenoiserConfig cfg = TinyConfig();
  cfg.zero_init_output = true;
  nn::UNet<double> model(cfg);
  std::mt19937_64 rng(8);
  nn::Tape<double> tape(false);
  const auto y = model.Forward(tape,
                               nn::MakeVar(Uniform<double>(rng, 1, 6, 8, 8)),
                               {10}, {RandomMap(rng, 8, 8, 3)});
  for (double v : y->value.data) EXPECT_EQ(v, 0.0);
}

TEST(UNetTest, SeedDeterminism) {
  DenoiserConfig cfg = TinyConfig();
  nn::UNet<double> a(cfg), b(cfg);
  cfg.init_seed = 1;
  nn::UNet<double> c(cfg);
  std::mt19937_64 rng(9);
  const auto x = nn::MakeVar(Uniform<double>(rng, 1, 6, 8, 8));
  const std::vector<SegmentationMap> maps = {RandomMap(rng, 8, 8, 3)};
  nn::Tape<double> tape(false);
  const auto ya = a.Forward(tape, x, {50}, maps);
  const auto yb = b.Forward(tape, x, {50}, maps);
  const auto yc = c.Forward(tape, x, {50}, maps);
  EXPECT_EQ(ya->value.data, yb->value.data);
  EXPECT_NE(ya->value.data, yc->value.data);
}

TEST(UNetTest, RejectsBadConfig) {
  DenoiserConfig cfg = TinyConfig();
  cfg.attention_levels = {2};
  EXPECT_THROW(nn::UNet<double>{cfg}, InvalidArgument);
  cfg = TinyConfig();
  cfg.base_channels = 3;  // not divisible by the group count
  EXPECT_THROW(nn::UNet<double>{cfg}, InvalidArgument);
}

TEST(UNetTest, FullModelGradientCheck) {
  nn::UNet<double> model(TinyConfig());
  const NoiseSchedule sched = MakeSchedule();
  std::mt19937_64 rng(10);
  const TrainingBatch<double> batch = RandomBatch<double>(rng, 2, 8, 8, 3);
  const Tensor<double> eps = Gaussian<double>(rng, 2, 3, 8, 8);
  const oracle::GradCheckResult r = oracle::CheckModelGradients(
      model, sched, batch, {37, 700}, eps, 10, 1e-4, 11);
  EXPECT_EQ(r.checked, 10);
  EXPECT_LE(r.worst_relative, 1e-3);
}

// ---- Sampler ----

TEST(SamplerTest, TimestepSubsequence) {
  const std::vector<int> ts = TimestepSubsequence(1000, 20);
  ASSERT_EQ(ts.size(), 20u);
  EXPECT_EQ(ts.front(), 1000);
  EXPECT_EQ(ts.back(), 1);
  for (std::size_t i = 1; i < ts.size(); ++i) EXPECT_LT(ts[i], ts[i - 1]);
  EXPECT_EQ(TimestepSubsequence(1000, 1), std::vector<int>{1000});
  EXPECT_EQ(TimestepSubsequence(5, 5), (std::vector<int>{5, 4, 3, 2, 1}));
  EXPECT_THROW(TimestepSubsequence(10, 11), InvalidArgument);
  EXPECT_THROW(TimestepSubsequence(10, 0), InvalidArgument);
}

TEST(SamplerTest, StepInputLayout) {
  std::mt19937_64 rng(12);
  const CoarseImage c = RandomRaster<CoarseTag>(rng, 3, 5);
  const Tensor<double> cond = ConditioningTensor(c);
  ASSERT_EQ(cond.h, 12);
  ASSERT_EQ(cond.w, 20);
  const ModelRangeImage want = ToModelRange(UpscaleCoarse(c));
  for (std::size_t i = 0; i < cond.size(); ++i) {
    EXPECT_EQ(cond.data[i], want.values()[i]);
  }
  const Tensor<double> xt = Gaussian<double>(rng, 1, 3, 12, 20);
  const Tensor<double> in = DenoiseStepInput(xt, c);
  EXPECT_EQ(in.c, 6);
  const std::size_t half = xt.size();
  for (std::size_t i = 0; i < half; ++i) {
    EXPECT_EQ(in.data[i], xt.data[i]);
    EXPECT_EQ(in.data[half + i], cond.data[i]);
  }
}

// Predicts the exact noise for a known clean signal.
class OraclePredictor : public NoisePredictor {
 public:
  OraclePredictor(const Tensor<double>& x0, const NoiseSchedule& sched)
      : x0_(x0), sched_(sched) {}
  Tensor<double> PredictNoise(const Tensor<double>& input, int t,
                              const SegmentationMap&) const override {
    const double ab = sched_.AlphaBar(t);
    Tensor<double> eps(1, 3, input.h, input.w);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      eps.data[i] = (input.data[i] - std::sqrt(ab) * x0_.data[i]) /
                    std::sqrt(1 - ab);
    }
    return eps;
  }

 private:
  Tensor<double> x0_;
  const NoiseSchedule& sched_;
};

// Predicts zero and logs the conditioning channels of every input.
class RecordingPredictor : public NoisePredictor {
 public:
  Tensor<double> PredictNoise(const Tensor<double>& input, int t,
                              const SegmentationMap&) const override {
    Tensor<double> cond(1, 3, input.h, input.w);
    std::copy(input.data.begin() + cond.size(), input.data.end(),
              cond.data.begin());
    conditioning.push_back(cond);
    timesteps.push_back(t);
    return Tensor<double>(1, 3, input.h, input.w);
  }
  mutable std::vector<Tensor<double>> conditioning;
  mutable std::vector<int> timesteps;
};

TEST(SamplerTest, FinalStepIgnoresRng) {
  const NoiseSchedule sched = MakeSchedule();
  std::mt19937_64 rng(13);
  const Tensor<double> x0 = Uniform<double>(rng, 1, 3, 8, 8);
  const Tensor<double> cond = Uniform<double>(rng, 1, 3, 8, 8);
  const Tensor<double> xt = QSample(x0, 40, Gaussian<double>(rng, 1, 3, 8, 8),
                                    sched);
  OraclePredictor model(x0, sched);
  const SegmentationMap s(8, 8, 3);
  std::mt19937_64 r1(1), r2(2);
  const Tensor<double> a = PSampleStep(model, sched, xt, 40, 0, cond, s, r1);
  const Tensor<double> b = PSampleStep(model, sched, xt, 40, 0, cond, s, r2);
  EXPECT_EQ(a.data, b.data);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    EXPECT_NEAR(a.data[i], x0.data[i], 1e-12);
  }
  const Tensor<double> c = PSampleStep(model, sched, xt, 40, 20, cond, s, r1);
  const Tensor<double> d = PSampleStep(model, sched, xt, 40, 20, cond, s, r2);
  EXPECT_NE(c.data, d.data);
  EXPECT_THROW(PSampleStep(model, sched, xt, 20, 40, cond, s, r1),
               InvalidArgument);
}

TEST(SamplerTest, ConditioningConstantAcrossChain) {
  const NoiseSchedule sched = MakeSchedule();
  std::mt19937_64 rng(14);
  const CoarseImage c = RandomRaster<CoarseTag>(rng, 4, 6);
  const SegmentationMap s = RandomMap(rng, 16, 24, 3);
  RecordingPredictor model;
  const Image out = Sample(model, sched, c, s, SamplerConfig{});
  EXPECT_EQ(out.height(), 16);
  EXPECT_EQ(out.width(), 24);
  ASSERT_EQ(model.conditioning.size(), 20u);
  EXPECT_EQ(model.timesteps, TimestepSubsequence(1000, 20));
  const Tensor<double> want = ConditioningTensor(c);
  for (const auto& cond : model.conditioning) EXPECT_EQ(cond.data, want.data);
}

TEST(SamplerTest, DeterministicPerSeed) {
  const NoiseSchedule sched = MakeSchedule();
  DenoiserConfig cfg = TinyConfig();
  nn::UNet<float> net(cfg);
  UNetPredictor model(net);
  std::mt19937_64 rng(15);
  const CoarseImage c = RandomRaster<CoarseTag>(rng, 2, 2);
  const SegmentationMap s = RandomMap(rng, 8, 8, 3);
  SamplerConfig sc;
  sc.steps = 5;
  const Image a = Sample(model, sched, c, s, sc);
  const Image b = Sample(model, sched, c, s, sc);
  sc.seed = 1;
  const Image d = Sample(model, sched, c, s, sc);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, d);
  EXPECT_THROW(Sample(model, sched, c, RandomMap(rng, 8, 12, 3), sc),
               InvalidArgument);
}

// ---- Training ----

TEST(TrainingTest, ZeroHeadLossIsNoiseVariance) {
  DenoiserConfig cfg = TinyConfig();
  cfg.zero_init_output = true;
  nn::UNet<double> model(cfg);
  const NoiseSchedule sched = MakeSchedule();
  std::mt19937_64 rng(16);
  const TrainingBatch<double> batch = RandomBatch<double>(rng, 4, 16, 16, 3);
  const Tensor<double> eps = Gaussian<double>(rng, 4, 3, 16, 16);
  nn::Tape<double> tape(false);
  const double loss =
      DiffusionLoss(tape, model, sched, batch, {1, 10, 500, 1000}, eps)
          ->value.data[0];
  double ms = 0;
  for (double v : eps.data) ms += v * v;
  EXPECT_NEAR(loss, ms / eps.size(), 1e-12);
  EXPECT_NEAR(loss, 1.0, 0.05);
}

TEST(TrainingTest, StepIsDeterministic) {
  const NoiseSchedule sched = MakeSchedule();
  std::mt19937_64 rng(17);
  const TrainingBatch<double> batch = RandomBatch<double>(rng, 2, 8, 8, 3);
  nn::UNet<double> a(TinyConfig()), b(TinyConfig());
  std::mt19937_64 ra(5), rb(5);
  const double la = TrainingStep(a, sched, batch, ra);
  const double lb = TrainingStep(b, sched, batch, rb);
  EXPECT_EQ(la, lb);
  EXPECT_TRUE(std::isfinite(la));
  EXPECT_GT(la, 0.0);
  for (std::size_t k = 0; k < a.params().params().size(); ++k) {
    EXPECT_EQ(a.params().params()[k].second->grad.data,
              b.params().params()[k].second->grad.data);
  }
}

TEST(TrainingTest, AdamMinimizesQuadratic) {
  nn::ParamStore<double> store(0);
  auto p = store.Constant("p", 1, 4, 1, 1, 0.0);
  const Tensor<double> target = [] {
    Tensor<double> t(1, 4, 1, 1);
    t.data = {1.0, -2.0, 0.5, 3.0};
    return t;
  }();
  Adam<double> adam(store, 0.05);
  for (int i = 0; i < 2000; ++i) {
    nn::Tape<double> tape;
    tape.Backward(nn::MseLoss(tape, p, target));
    adam.Step();
  }
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p->value.data[i], target.data[i], 1e-3);
}

TEST(TrainingTest, SmoothedLoss) {
  const std::vector<double> l = {4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(SmoothedLoss(l, 4, 2), 1.5);
  EXPECT_DOUBLE_EQ(SmoothedLoss(l, 2, 2), 3.5);
  EXPECT_THROW(SmoothedLoss(l, 5, 2), InvalidArgument);
}

TEST(TrainingTest, TrainerReducesLossOnTinySet) {
  std::mt19937_64 rng(18);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 4; ++i) {
    SegmentationMap s(16, 16, 3, 0);
    for (int y = 8; y < 16; ++y)
      for (int x = 0; x < 16; ++x) s.set(y, x, 1);
    std::vector<double> v(3 * 256);
    for (int c = 0; c < 3; ++c)
      for (int p = 0; p < 256; ++p) v[c * 256 + p] = p < 128 ? 0.2 : 0.7;
    const Image img = Image::FromPlanar(16, 16, v);
    data.push_back({img, DownscaleAverage(img), s});
  }
  DenoiserConfig dc = TinyConfig();
  dc.zero_init_output = true;
  nn::UNet<float> model(dc);
  TrainConfig tc;
  tc.steps = 300;
  tc.crop_height = 8;
  tc.crop_width = 8;
  tc.learning_rate = 3e-3;
  Trainer trainer(model, MakeSchedule(), tc, data);
  trainer.Run();
  ASSERT_EQ(trainer.losses().size(), 300u);
  EXPECT_LT(SmoothedLoss(trainer.losses(), 300, 50),
            0.5 * SmoothedLoss(trainer.losses(), 50, 50));
}

// ---- Checkpoint ----

TEST(CheckpointTest, RoundTripPreservesForward) {
  DenoiserConfig cfg = TinyConfig();
  cfg.init_seed = 21;
  nn::UNet<float> model(cfg);
  const ScheduleConfig sched{500, 2e-4, 0.03};
  const std::vector<std::uint8_t> bytes = SerializeCheckpoint(model, sched);
  const LoadedCheckpoint loaded = DeserializeCheckpoint(bytes);
  EXPECT_EQ(loaded.schedule, sched);
  EXPECT_EQ(loaded.model->config(), cfg);
  std::mt19937_64 rng(22);
  const auto x = nn::MakeVar(Uniform<float>(rng, 1, 6, 8, 8));
  const std::vector<SegmentationMap> maps = {RandomMap(rng, 8, 8, 3)};
  nn::Tape<float> tape(false);
  EXPECT_EQ(model.Forward(tape, x, {9}, maps)->value.data,
            loaded.model->Forward(tape, x, {9}, maps)->value.data);

  testing::ScratchDir dir("ckpt");
  const std::string path = (dir.path() / "m.ckpt").string();
  SaveCheckpoint(path, model, sched);
  EXPECT_EQ(SerializeCheckpoint(*LoadCheckpoint(path).model, sched), bytes);
}

TEST(CheckpointTest, CorruptionIsDetected) {
  nn::UNet<float> model(TinyConfig());
  const std::vector<std::uint8_t> good = SerializeCheckpoint(model, {});
  auto bad = good;
  bad[0] ^= 1;
  EXPECT_THROW(DeserializeCheckpoint(bad), DecodeError);
  bad = good;
  bad[4] = 9;
  EXPECT_THROW(DeserializeCheckpoint(bad), DecodeError);
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(DeserializeCheckpoint(bad), DecodeError);
  for (std::size_t n : {std::size_t{0}, std::size_t{10}, std::size_t{40},
                        good.size() / 2, good.size() - 1}) {
    EXPECT_THROW(DeserializeCheckpoint(std::span(good.data(), n)), DecodeError)
        << n;
  }
  bad = good;
  bad[20] = '!';
  EXPECT_THROW(DeserializeCheckpoint(bad), DecodeError);
}

// ---- Config ----

TEST(ConfigTest, SectionsCommentsAndLists) {
  KeyValueConfig kv = KeyValueConfig::Parse(
      "# top\n"
      "[denoiser]\n"
      "base_channels = 16   # trailing\n"
      "channel_mult = 1, 2, 2\n"
      "zero_init_output = false\n"
      "\n"
      "[sampler]\n"
      "steps=7\n");
  DenoiserConfig dc;
  ReadDenoiserConfig(kv, dc);
  SamplerConfig sc;
  ReadSamplerConfig(kv, sc);
  kv.CheckAllConsumed();
  EXPECT_EQ(dc.base_channels, 16);
  EXPECT_EQ(dc.channel_mult, (std::vector<int>{1, 2, 2}));
  EXPECT_FALSE(dc.zero_init_output);
  EXPECT_EQ(sc.steps, 7);
  EXPECT_EQ(dc.num_res_blocks, DenoiserConfig{}.num_res_blocks);
}

TEST(ConfigTest, Errors) {
  EXPECT_THROW(KeyValueConfig::Parse("a = 1\na = 2\n"), InvalidArgument);
  EXPECT_THROW(KeyValueConfig::Parse("no equals sign\n"), InvalidArgument);
  EXPECT_THROW(KeyValueConfig::Parse("[unterminated\n"), InvalidArgument);
  KeyValueConfig kv = KeyValueConfig::Parse("[train]\nstepz = 3\nsteps = x\n");
  TrainConfig tc;
  EXPECT_THROW(ReadTrainConfig(kv, tc), InvalidArgument);
  KeyValueConfig kv2 = KeyValueConfig::Parse("x.flag = 1\ny.flag = maybe\n");
  EXPECT_EQ(kv2.GetBool("x.flag"), true);
  EXPECT_THROW(kv2.GetBool("y.flag"), InvalidArgument);
  KeyValueConfig kv3 = KeyValueConfig::Parse("[train]\nstepz = 3\n");
  ReadTrainConfig(kv3, tc);
  EXPECT_THROW(kv3.CheckAllConsumed(), InvalidArgument);
  EXPECT_THROW(KeyValueConfig::Load("/nonexistent/spic.cfg"), IoError);
}

}  // namespace
}  // namespace spic
