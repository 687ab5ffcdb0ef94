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

#ifndef SPIC_TESTS_ORACLES_HPP_
#define SPIC_TESTS_ORACLES_HPP_

// Independent reference computations. None of these call the library
// routine they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "spic/core/labels.hpp"
#include "spic/diffusion/schedule.hpp"
#include "spic/diffusion/trainer.hpp"
#include "spic/diffusion/unet.hpp"

namespace spic::oracle {

// prod_{i <= t} (1 - beta_i) for a linear schedule, in long double.
inline long double LinearAlphaBar(int T, long double b0, long double b1,
                                  int t) {
  long double log_prod = 0;
  for (int i = 1; i <= t; ++i) {
    const long double beta =
        T == 1 ? b0 : b0 + (b1 - b0) * (i - 1) / static_cast<long double>(T - 1);
    log_prod += std::log1p(-beta);
  }
  return std::exp(log_prod);
}

// Rounds to `digits` significant digits.
inline double Significant(double v, int digits) {
  if (v == 0) return 0;
  const double scale =
      std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

// mIoU from explicit pixel-index sets per class.
inline double BruteForceMiou(const SegmentationMap& a,
                             const SegmentationMap& b) {
  double sum = 0;
  int count = 0;
  for (int k = 0; k < a.num_classes(); ++k) {
    std::set<int> sa, sb;
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) {
        if (a.at(y, x) == k) sa.insert(y * a.width() + x);
        if (b.at(y, x) == k) sb.insert(y * a.width() + x);
      }
    }
    std::vector<int> inter, uni;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(inter));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                   std::back_inserter(uni));
    if (uni.empty()) continue;
    sum += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    ++count;
  }
  return sum / count;
}

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Cyclic Jacobi eigendecomposition of a symmetric matrix in long double.
inline void JacobiEigen(MatL a, VecL* values, MatL* vectors) {
  const int n = static_cast<int>(a.rows());
  MatL v = MatL::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-40L) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300L) continue;
        const long double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const long double t =
            (theta >= 0 ? 1 : -1) /
            (std::abs(theta) + std::sqrt(theta * theta + 1));
        const long double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          const long double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const long double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const long double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  *values = a.diagonal();
  *vectors = v;
}

inline MatL SqrtPsd(const MatL& m) {
  VecL ev;
  MatL vec;
  JacobiEigen(m, &ev, &vec);
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(ev[i], 0.0L));
  return vec * ev.asDiagonal() * vec.transpose();
}

// FID through the opposite product order, Sb^(1/2) Sa Sb^(1/2), in long
// double with Jacobi rotations.
inline long double Fid(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& sa,
                       const Eigen::VectorXd& mu_b,
                       const Eigen::MatrixXd& sb) {
  const MatL a = sa.cast<long double>(), b = sb.cast<long double>();
  const MatL rb = SqrtPsd(b);
  VecL ev;
  MatL vec;
  JacobiEigen(rb * a * rb, &ev, &vec);
  long double tr = 0;
  for (int i = 0; i < ev.size(); ++i) tr += std::sqrt(std::max(ev[i], 0.0L));
  const long double d2 = (mu_a - mu_b).cast<long double>().squaredNorm();
  return d2 + a.trace() + b.trace() - 2 * tr;
}

// Q diag(lambda) Q^T with Q a random orthogonal matrix and eigenvalues
// log-spaced from 1 down to 1 / cond.
inline Eigen::MatrixXd RandomSpd(std::mt19937_64& rng, int d, double cond) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a)
                                .householderQ();
  Eigen::VectorXd ev(d);
  for (int i = 0; i < d; ++i) {
    ev[i] = d == 1 ? 1.0 : std::pow(cond, -static_cast<double>(i) / (d - 1));
  }
  Eigen::MatrixXd m = q * ev.asDiagonal() * q.transpose();
  return (m + m.transpose()) / 2;
}

inline Eigen::MatrixXd RandomOrthogonal(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

struct GradCheckResult {
  int checked = 0;
  double worst_relative = 0;
};

// Central finite differences of the fixed-noise diffusion loss against
// backprop, on `count` randomly chosen parameter scalars of a double model.
inline GradCheckResult CheckModelGradients(nn::UNet<double>& model,
                                           const NoiseSchedule& sched,
                                           const TrainingBatch<double>& batch,
                                           const std::vector<int>& t,
                                           const nn::Tensor<double>& eps,
                                           int count, double h,
                                           std::uint64_t seed) {
  auto loss_value = [&]() {
    nn::Tape<double> tape(false);
    return DiffusionLoss(tape, model, sched, batch, t, eps)->value.data[0];
  };
  model.params().ZeroGrad();
  {
    nn::Tape<double> tape;
    auto loss = DiffusionLoss(tape, model, sched, batch, t, eps);
    tape.Backward(loss);
  }
  const auto& params = model.params().params();
  std::size_t total = 0;
  for (const auto& p : params) total += p.second->value.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  GradCheckResult out;
  for (int i = 0; i < count; ++i) {
    std::size_t idx = pick(rng);
    std::size_t k = 0;
    while (idx >= params[k].second->value.size()) {
      idx -= params[k].second->value.size();
      ++k;
    }
    nn::Node<double>& node = *params[k].second;
    const double analytic = node.grad.empty() ? 0.0 : node.grad.data[idx];
    const double orig = node.value.data[idx];
    node.value.data[idx] = orig + h;
    const double fp = loss_value();
    node.value.data[idx] = orig - h;
    const double fm = loss_value();
    node.value.data[idx] = orig;
    const double numeric = (fp - fm) / (2 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    out.worst_relative =
        std::max(out.worst_relative, std::abs(analytic - numeric) / denom);
    ++out.checked;
  }
  return out;
}

}  // namespace spic::oracle

#endif  // SPIC_TESTS_ORACLES_HPP_
