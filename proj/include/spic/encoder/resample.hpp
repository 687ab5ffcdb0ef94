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

#ifndef SPIC_ENCODER_RESAMPLE_HPP_
#define SPIC_ENCODER_RESAMPLE_HPP_

#include "spic/core/image.hpp"

namespace spic {

// Each output pixel is the per-channel mean of its factor x factor block.
// Both image sides must be multiples of `factor`.
CoarseImage DownscaleAverage(const Image& x, int factor = kDownscaleFactor);

// Bilinear interpolation to factor-times the size, sampling at pixel centres
// (half-pixel offset) with edge clamping.
Image UpscaleCoarse(const CoarseImage& c, int factor = kDownscaleFactor);

}  // namespace spic

#endif  // SPIC_ENCODER_RESAMPLE_HPP_
