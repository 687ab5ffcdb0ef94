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

#ifndef SPIC_METRICS_FID_HPP_
#define SPIC_METRICS_FID_HPP_

#include <Eigen/Dense>

namespace spic {

// Gaussian fit of a feature set: mean, unbiased covariance, sample count.
struct FeatureStatistics {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  long long n = 0;

  int dim() const { return static_cast<int>(mu.size()); }
};

// `features` holds one sample per row; requires at least two rows.
FeatureStatistics ComputeFeatureStatistics(const Eigen::MatrixXd& features);

// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)), clamped at 0.
double Fid(const FeatureStatistics& a, const FeatureStatistics& b);

// Symmetric PSD square root via eigendecomposition; eigenvalues in
// (-tol, 0) are clamped to zero and anything below throws.
Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, double tol = 1e-8);

}  // namespace spic

#endif  // SPIC_METRICS_FID_HPP_
