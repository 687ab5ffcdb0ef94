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

#ifndef SPIC_DIFFUSION_UNET_HPP_
#define SPIC_DIFFUSION_UNET_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "spic/core/labels.hpp"
#include "spic/diffusion/layers.hpp"

namespace spic {

// Architecture of the denoising U-Net. The input is always six channels
// (current estimate + upscaled coarse image) and the output three (noise).
struct DenoiserConfig {
  static constexpr int kInChannels = 6;
  static constexpr int kOutChannels = 3;

  int base_channels = 64;
  std::vector<int> channel_mult = {1, 2, 4};
  int num_res_blocks = 2;
  // Resolution levels (0 = full resolution) that get self-attention.
  std::vector<int> attention_levels = {2};
  int norm_groups = 8;
  int spade_hidden = 32;
  int num_classes = 5;
  std::uint64_t init_seed = 0;
  // Zero the last convolution of each residual branch and the output head.
  bool zero_init_output = true;

  int levels() const { return static_cast<int>(channel_mult.size()); }
  // Spatial sizes must be multiples of this.
  int size_multiple() const { return 1 << (levels() - 1); }
  int time_dim() const { return 4 * base_channels; }
  void Validate() const;
  bool operator==(const DenoiserConfig&) const = default;
};

namespace nn {

// Sinusoidal timestep features, [N, dim, 1, 1].
template <typename T>
Tensor<T> TimestepFeatures(const std::vector<int>& t, int dim);

// One-hot planes of each map, nearest-resized to height x width,
// [N, n_c, height, width].
template <typename T>
Tensor<T> OneHotBatch(const std::vector<SegmentationMap>& maps, int height,
                      int width);

// Noise predictor eps(x_t, t | coarse, s). Plain residual blocks in the
// encoder path; SPADE residual blocks in the bottleneck and every decoder
// level.
template <typename T>
class UNet {
 public:
  explicit UNet(const DenoiserConfig& cfg);

  const DenoiserConfig& config() const { return cfg_; }
  ParamStore<T>& params() { return store_; }
  const ParamStore<T>& params() const { return store_; }

  // x: [N, 6, H, W]; t: N timesteps in [1, T]; maps: N segmentation maps at
  // the input resolution. Returns the predicted noise, [N, 3, H, W].
  Var<T> Forward(Tape<T>& tape, const Var<T>& x, const std::vector<int>& t,
                 const std::vector<SegmentationMap>& maps) const;

  // SPADE layers in forward order, for tests of the conditioning path.
  std::vector<const SpadeNorm<T>*> SpadeLayers() const;

 private:
  struct Level {
    std::vector<ResBlock<T>> down_blocks;
    std::vector<AttentionBlock<T>> down_attn;
    Conv<T> downsample;
    std::vector<ResBlock<T>> up_blocks;
    std::vector<AttentionBlock<T>> up_attn;
    Conv<T> upsample_conv;
    bool attention = false;
  };

  DenoiserConfig cfg_;
  ParamStore<T> store_;
  Conv<T> time_fc1_, time_fc2_;
  Conv<T> conv_in_;
  std::vector<Level> levels_;
  ResBlock<T> mid1_, mid2_;
  AttentionBlock<T> mid_attn_;
  GroupNormAffine<T> out_norm_;
  Conv<T> conv_out_;
};

}  // namespace nn
}  // namespace spic

#endif  // SPIC_DIFFUSION_UNET_HPP_
