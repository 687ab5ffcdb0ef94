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

#include "spic/metrics/feature_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spic/core/error.hpp"

namespace spic {
namespace {

struct Planes {
  int c, h, w;
  std::vector<double> v;
};

// 3x3 stride-2 convolution with zero padding, then ReLU.
Planes ConvRelu(const Planes& in, int cout, const std::vector<double>& w,
                const std::vector<double>& b) {
  Planes out{cout, (in.h + 1) / 2, (in.w + 1) / 2, {}};
  out.v.assign(static_cast<std::size_t>(cout) * out.h * out.w, 0.0);
  for (int o = 0; o < cout; ++o) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        double acc = b[o];
        for (int i = 0; i < in.c; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            const int sy = 2 * y + ky - 1;
            if (sy < 0 || sy >= in.h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int sx = 2 * x + kx - 1;
              if (sx < 0 || sx >= in.w) continue;
              acc += w[((o * in.c + i) * 3 + ky) * 3 + kx] *
                     in.v[(static_cast<std::size_t>(i) * in.h + sy) * in.w + sx];
            }
          }
        }
        out.v[(static_cast<std::size_t>(o) * out.h + y) * out.w + x] =
            std::max(acc, 0.0);
      }
    }
  }
  return out;
}

}  // namespace

RandomConvFeatureExtractor::RandomConvFeatureExtractor(std::uint64_t seed,
                                                       int hidden,
                                                       int channels)
    : hidden_(hidden), channels_(channels) {
  SPIC_REQUIRE(hidden >= 1 && channels >= 1,
               "feature extractor: channel counts must be positive");
  std::mt19937_64 rng(seed);
  auto fill = [&rng](std::vector<double>& v, std::size_t n, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    v.resize(n);
    for (double& x : v) x = u(rng);
  };
  fill(w1_, static_cast<std::size_t>(hidden) * 3 * 9, std::sqrt(6.0 / 27));
  fill(b1_, hidden, 0.1);
  fill(w2_, static_cast<std::size_t>(channels) * hidden * 9,
       std::sqrt(6.0 / (9.0 * hidden)));
  fill(b2_, channels, 0.1);
}

Eigen::VectorXd RandomConvFeatureExtractor::Extract(const Image& x) const {
  Planes in{kRgbChannels, x.height(), x.width(),
            std::vector<double>(x.values().begin(), x.values().end())};
  const Planes h1 = ConvRelu(in, hidden_, w1_, b1_);
  const Planes h2 = ConvRelu(h1, channels_, w2_, b2_);
  Eigen::VectorXd f(2 * channels_);
  const std::size_t n = static_cast<std::size_t>(h2.h) * h2.w;
  for (int c = 0; c < channels_; ++c) {
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = h2.v[c * n + i];
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    f[c] = mean;
    f[channels_ + c] = std::sqrt(std::max(0.0, s2 / n - mean * mean));
  }
  return f;
}

FeatureStatistics ExtractStatistics(const FeatureExtractor& fx,
                                    const std::vector<Image>& images) {
  Eigen::MatrixXd feats(static_cast<Eigen::Index>(images.size()), fx.dim());
  for (std::size_t i = 0; i < images.size(); ++i) {
    feats.row(static_cast<Eigen::Index>(i)) = fx.Extract(images[i]).transpose();
  }
  return ComputeFeatureStatistics(feats);
}

}  // namespace spic
