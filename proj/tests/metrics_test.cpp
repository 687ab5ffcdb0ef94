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
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spic/core/error.hpp"
#include "spic/metrics/feature_extractor.hpp"
#include "spic/metrics/fid.hpp"
#include "spic/metrics/iou.hpp"
#include "spic/metrics/psnr.hpp"
#include "test_util.hpp"

namespace spic {
namespace {

using testing::RandomMap;

SegmentationMap Map2x2(std::vector<std::uint8_t> v) {
  return SegmentationMap::FromLabels(2, 2, 2, std::move(v));
}

TEST(IouTest, HandCounted) {
  const SegmentationMap a = Map2x2({0, 0, 1, 1});
  const SegmentationMap b = Map2x2({0, 1, 1, 1});
  // Class 0: {(0,0),(0,1)} vs {(0,0)}. Class 1: {(1,0),(1,1)} vs
  // {(0,1),(1,0),(1,1)}.
  EXPECT_DOUBLE_EQ(*IouClass(a, b, 0), 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(*IouClass(a, b, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(Miou(a, b), 7.0 / 12.0);
}

TEST(IouTest, TrivialCases) {
  const SegmentationMap a = Map2x2({0, 0, 1, 1});
  EXPECT_EQ(Miou(a, a), 1.0);
  EXPECT_EQ(*IouClass(a, Map2x2({1, 1, 0, 0}), 0), 0.0);
  const SegmentationMap z = SegmentationMap::FromLabels(2, 2, 3, {0, 0, 0, 0});
  EXPECT_FALSE(IouClass(z, z, 2).has_value());
  EXPECT_EQ(Miou(z, z), 1.0);
}

TEST(IouTest, RejectsMismatch) {
  const SegmentationMap a = Map2x2({0, 0, 1, 1});
  EXPECT_THROW(Miou(a, SegmentationMap(2, 3, 2)), InvalidArgument);
  EXPECT_THROW(Miou(a, SegmentationMap(2, 2, 3)), InvalidArgument);
  ConfusionAccumulator acc(2);
  EXPECT_THROW(acc.Accumulate(a, SegmentationMap(2, 2, 3)), InvalidArgument);
  EXPECT_THROW(acc.Miou(), InvalidArgument);
  EXPECT_THROW(acc.Merge(ConfusionAccumulator(3)), InvalidArgument);
}

TEST(IouTest, MatchesBruteForceExactly) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const int n_c = 2 + i % 6;
    const SegmentationMap a = RandomMap(rng, 16, 16, n_c);
    const SegmentationMap b = RandomMap(rng, 16, 16, n_c);
    const double m = Miou(a, b);
    EXPECT_EQ(m, oracle::BruteForceMiou(a, b));
    EXPECT_EQ(m, Miou(b, a));
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
}

TEST(AccumulatorTest, SingleSpanMatchesPairwise) {
  std::mt19937_64 rng(2);
  const SegmentationMap a = RandomMap(rng, 8, 8, 4);
  const SegmentationMap b = RandomMap(rng, 8, 8, 4);
  ConfusionAccumulator acc(4);
  acc.Accumulate(a, b);
  EXPECT_EQ(acc.Miou(), Miou(a, b));
  for (int k = 0; k < 4; ++k) EXPECT_EQ(acc.Iou(k), IouClass(a, b, k));
}

TEST(AccumulatorTest, HandMergedCounts) {
  // Three 1x3 pairs with n_c = 2.
  auto m = [](std::vector<std::uint8_t> v) {
    return SegmentationMap::FromLabels(1, 3, 2, std::move(v));
  };
  ConfusionAccumulator acc(2);
  acc.Accumulate(m({0, 0, 1}), m({0, 1, 1}));  // I = {1, 1}, U = {2, 2}
  acc.Accumulate(m({1, 1, 1}), m({1, 1, 1}));  // I = {0, 3}, U = {0, 3}
  acc.Accumulate(m({0, 0, 0}), m({1, 1, 0}));  // I = {1, 0}, U = {3, 2}
  EXPECT_EQ(acc.intersection(), (std::vector<std::uint64_t>{2, 4}));
  EXPECT_EQ(acc.union_counts(), (std::vector<std::uint64_t>{5, 7}));
  EXPECT_DOUBLE_EQ(acc.Miou(), (2.0 / 5.0 + 4.0 / 7.0) / 2.0);
}

TEST(AccumulatorTest, MergeIsAssociativeAndCommutative) {
  std::mt19937_64 rng(3);
  std::vector<ConfusionAccumulator> parts;
  for (int i = 0; i < 3; ++i) {
    ConfusionAccumulator acc(5);
    for (int j = 0; j < 4; ++j) {
      acc.Accumulate(RandomMap(rng, 6, 6, 5), RandomMap(rng, 6, 6, 5));
    }
    parts.push_back(acc);
  }
  ConfusionAccumulator ab_c = parts[0];
  ab_c.Merge(parts[1]);
  ab_c.Merge(parts[2]);
  ConfusionAccumulator bc = parts[1];
  bc.Merge(parts[2]);
  ConfusionAccumulator a_bc = parts[0];
  a_bc.Merge(bc);
  ConfusionAccumulator cba = parts[2];
  cba.Merge(parts[1]);
  cba.Merge(parts[0]);
  EXPECT_EQ(ab_c, a_bc);
  EXPECT_EQ(ab_c, cba);
  EXPECT_EQ(ab_c.Miou(), cba.Miou());
}

TEST(FeatureStatsTest, PlusMinusV) {
  Eigen::MatrixXd f(2, 3);
  f.row(0) << 1, -2, 0.5;
  f.row(1) = -f.row(0);
  const FeatureStatistics s = ComputeFeatureStatistics(f);
  const Eigen::VectorXd v = f.row(0).transpose();
  EXPECT_EQ(s.dim(), 3);
  EXPECT_EQ(s.n, 2);
  EXPECT_LT(s.mu.norm(), 1e-15);
  EXPECT_LT((s.sigma - 2 * v * v.transpose()).norm(), 1e-14);
}

TEST(FeatureStatsTest, ConstantAndTooFew) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(5, 4, 0.25);
  const FeatureStatistics s = ComputeFeatureStatistics(f);
  EXPECT_EQ(s.sigma.norm(), 0.0);
  EXPECT_THROW(ComputeFeatureStatistics(Eigen::MatrixXd(1, 4)),
               InvalidArgument);
}

FeatureStatistics Stats(Eigen::VectorXd mu, Eigen::MatrixXd sigma) {
  FeatureStatistics s;
  s.mu = std::move(mu);
  s.sigma = std::move(sigma);
  s.n = 2;
  return s;
}

TEST(FidTest, ClosedForms) {
  EXPECT_NEAR(Fid(Stats(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)),
                  Stats(Eigen::VectorXd::Zero(1),
                        Eigen::MatrixXd::Constant(1, 1, 4.0))),
              1.0, 1e-12);
  Eigen::VectorXd mb(2);
  mb << 1, 0;
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(2, 2);
  sb.diagonal() << 4, 9;
  EXPECT_NEAR(Fid(Stats(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)),
                  Stats(mb, sb)),
              6.0, 1e-12);
}

TEST(FidTest, SelfDistanceAndRejects) {
  std::mt19937_64 rng(4);
  const FeatureStatistics a =
      Stats(Eigen::VectorXd::Random(6), oracle::RandomSpd(rng, 6, 1e3));
  EXPECT_NEAR(Fid(a, a), 0.0, 1e-8);
  EXPECT_GE(Fid(a, a), 0.0);
  EXPECT_THROW(Fid(a, Stats(Eigen::VectorXd::Zero(5),
                            Eigen::MatrixXd::Identity(5, 5))),
               InvalidArgument);
  FeatureStatistics bad = a;
  bad.sigma(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Fid(a, bad), InvalidArgument);
  EXPECT_THROW(PsdSqrt(-Eigen::MatrixXd::Identity(2, 2)), InvalidArgument);
}

TEST(FidTest, RotationInvariant) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const int n = 200, d = 8;
  Eigen::MatrixXd fa(n, d), fb(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      fa(i, j) = g(rng);
      fb(i, j) = 0.5 + (1 + 0.2 * j) * g(rng);
    }
  }
  const Eigen::MatrixXd q = oracle::RandomOrthogonal(rng, d);
  const double base =
      Fid(ComputeFeatureStatistics(fa), ComputeFeatureStatistics(fb));
  const double rotated = Fid(ComputeFeatureStatistics(fa * q),
                             ComputeFeatureStatistics(fb * q));
  EXPECT_GT(base, 0.1);
  EXPECT_NEAR(base, rotated, 1e-6);
}

TEST(FidTest, MatchesHighPrecisionOracle) {
  std::mt19937_64 rng(6);
  for (double cond : {1.0, 1e2, 1e4, 1e6}) {
    for (int d : {2, 5, 12}) {
      const Eigen::MatrixXd sa = oracle::RandomSpd(rng, d, cond);
      const Eigen::MatrixXd sb = oracle::RandomSpd(rng, d, cond);
      const Eigen::VectorXd ma = Eigen::VectorXd::Random(d);
      const Eigen::VectorXd mb = Eigen::VectorXd::Random(d);
      const double got = Fid(Stats(ma, sa), Stats(mb, sb));
      const double want =
          static_cast<double>(oracle::Fid(ma, sa, mb, sb));
      EXPECT_LE(std::abs(got - want), 1e-6 * std::abs(want))
          << "cond=" << cond << " d=" << d;
    }
  }
}

TEST(PsnrTest, KnownValues) {
  std::mt19937_64 rng(7);
  const Image x = testing::RandomRaster<FullResTag>(rng, 4, 6);
  EXPECT_TRUE(Psnr(x, x).identical);
  std::vector<double> a(3 * 24, 0.3), b(3 * 24, 0.4);
  const Image ia = Image::FromPlanar(4, 6, a), ib = Image::FromPlanar(4, 6, b);
  const PsnrResult r = Psnr(ia, ib);
  EXPECT_FALSE(r.identical);
  EXPECT_NEAR(r.db, 20.0, 1e-9);
  const Image y = testing::RandomRaster<FullResTag>(rng, 4, 6);
  EXPECT_EQ(Psnr(x, y).db, Psnr(y, x).db);
  EXPECT_THROW(Psnr(x, testing::RandomRaster<FullResTag>(rng, 4, 5)),
               InvalidArgument);
}

TEST(FeatureExtractorTest, DeterministicAndSensitive) {
  std::mt19937_64 rng(8);
  const Image x = testing::RandomRaster<FullResTag>(rng, 16, 32);
  const Image y = testing::RandomRaster<FullResTag>(rng, 16, 32);
  RandomConvFeatureExtractor a(3), b(3), c(4);
  EXPECT_EQ(a.dim(), 32);
  EXPECT_EQ(a.Extract(x), b.Extract(x));
  EXPECT_NE(a.Extract(x), a.Extract(y));
  EXPECT_NE(a.Extract(x), c.Extract(x));
  const FeatureStatistics s = ExtractStatistics(a, {x, y, x});
  EXPECT_EQ(s.n, 3);
  EXPECT_EQ(s.dim(), 32);
}

}  // namespace
}  // namespace spic
