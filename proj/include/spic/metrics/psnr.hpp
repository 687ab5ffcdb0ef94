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

#ifndef SPIC_METRICS_PSNR_HPP_
#define SPIC_METRICS_PSNR_HPP_

#include "spic/core/image.hpp"

namespace spic {

// 10 log10(1 / MSE) for images in [0, 1]. Identical images have no finite
// PSNR and report `identical` instead.
struct PsnrResult {
  bool identical = false;
  double db = 0;
};

PsnrResult Psnr(const Image& x, const Image& y);

}  // namespace spic

#endif  // SPIC_METRICS_PSNR_HPP_
