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

#include "spic/metrics/fid.hpp"

#include <algorithm>
#include <cmath>

#include "spic/core/error.hpp"

namespace spic {
namespace {

Eigen::VectorXd ClampedEigenvalues(const Eigen::MatrixXd& m, double tol) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                    Eigen::EigenvaluesOnly);
  SPIC_REQUIRE(es.info() == Eigen::Success, "FID: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (double& v : ev) {
    if (v < -tol) throw InvalidArgument("FID: matrix is not PSD");
    v = std::max(v, 0.0);
  }
  return ev;
}

}  // namespace

FeatureStatistics ComputeFeatureStatistics(const Eigen::MatrixXd& features) {
  SPIC_REQUIRE(features.rows() >= 2, "feature statistics need n >= 2");
  SPIC_REQUIRE(features.cols() >= 1, "feature statistics need d >= 1");
  SPIC_REQUIRE(features.allFinite(), "feature statistics: non-finite input");
  FeatureStatistics s;
  s.n = features.rows();
  s.mu = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mu.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(s.n - 1);
  s.sigma = 0.5 * (cov + cov.transpose());
  return s;
}

Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, double tol) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  SPIC_REQUIRE(es.info() == Eigen::Success, "FID: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (double& v : ev) {
    if (v < -tol) throw InvalidArgument("FID: matrix is not PSD");
    v = std::sqrt(std::max(v, 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double Fid(const FeatureStatistics& a, const FeatureStatistics& b) {
  SPIC_REQUIRE(a.dim() == b.dim() && a.dim() >= 1, "FID: dimension mismatch");
  SPIC_REQUIRE(a.sigma.rows() == a.dim() && a.sigma.cols() == a.dim() &&
                   b.sigma.rows() == b.dim() && b.sigma.cols() == b.dim(),
               "FID: covariance shape mismatch");
  SPIC_REQUIRE(a.mu.allFinite() && b.mu.allFinite() &&
                   a.sigma.allFinite() && b.sigma.allFinite(),
               "FID: non-finite statistics");
  const Eigen::MatrixXd ra = PsdSqrt(a.sigma);
  const Eigen::VectorXd ev = ClampedEigenvalues(ra * b.sigma * ra, 1e-8);
  double tr_sqrt = 0;
  for (double v : ev) tr_sqrt += std::sqrt(v);
  const double d2 = (a.mu - b.mu).squaredNorm();
  return std::max(0.0, d2 + a.sigma.trace() + b.sigma.trace() - 2 * tr_sqrt);
}

}  // namespace spic
