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

#include "spic/metrics/psnr.hpp"

#include <cmath>

#include "spic/core/error.hpp"

namespace spic {

PsnrResult Psnr(const Image& x, const Image& y) {
  SPIC_REQUIRE(x.height() == y.height() && x.width() == y.width(),
               "PSNR: images differ in size");
  const auto& a = x.values();
  const auto& b = y.values();
  double se = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    se += d * d;
  }
  if (se == 0) return {true, 0};
  return {false, 10.0 * std::log10(static_cast<double>(a.size()) / se)};
}

}  // namespace spic
