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

#include "spic/diffusion/unet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spic {

void DenoiserConfig::Validate() const {
  SPIC_REQUIRE(base_channels >= 1, "DenoiserConfig: base_channels >= 1");
  SPIC_REQUIRE(!channel_mult.empty(), "DenoiserConfig: channel_mult empty");
  for (int m : channel_mult) {
    SPIC_REQUIRE(m >= 1, "DenoiserConfig: channel multipliers must be >= 1");
  }
  SPIC_REQUIRE(num_res_blocks >= 1, "DenoiserConfig: num_res_blocks >= 1");
  for (int l : attention_levels) {
    SPIC_REQUIRE(l >= 0 && l < levels(),
                 "DenoiserConfig: attention level out of range");
  }
  SPIC_REQUIRE(norm_groups >= 1, "DenoiserConfig: norm_groups >= 1");
  for (int m : channel_mult) {
    SPIC_REQUIRE(base_channels * m % norm_groups == 0,
                 "DenoiserConfig: channel counts must be divisible by "
                 "norm_groups");
  }
  SPIC_REQUIRE(spade_hidden >= 1, "DenoiserConfig: spade_hidden >= 1");
  SPIC_REQUIRE(num_classes >= 1 && num_classes <= SegmentationMap::kMaxClasses,
               "DenoiserConfig: num_classes in [1, 255]");
}

namespace nn {

template <typename T>
Tensor<T> TimestepFeatures(const std::vector<int>& t, int dim) {
  Tensor<T> out(static_cast<int>(t.size()), dim, 1, 1);
  const int half = dim / 2;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (int k = 0; k < half; ++k) {
      const double freq = std::exp(-std::log(10000.0) * k / std::max(half, 1));
      const double a = t[i] * freq;
      out.data[i * dim + k] = static_cast<T>(std::sin(a));
      out.data[i * dim + half + k] = static_cast<T>(std::cos(a));
    }
  }
  return out;
}

template <typename T>
Tensor<T> OneHotBatch(const std::vector<SegmentationMap>& maps, int height,
                      int width) {
  SPIC_REQUIRE(!maps.empty(), "OneHotBatch: no maps");
  const int nc = maps[0].num_classes();
  Tensor<T> out(static_cast<int>(maps.size()), nc, height, width);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    SPIC_REQUIRE(maps[i].num_classes() == nc, "OneHotBatch: n_c mismatch");
    const SegmentationMap& src = maps[i];
    T* dst = out.sample(static_cast<int>(i));
    const std::size_t plane = static_cast<std::size_t>(height) * width;
    for (int y = 0; y < height; ++y) {
      const int sy = NearestSourceIndex(y, height, src.height());
      for (int x = 0; x < width; ++x) {
        const int label = src.at(sy, NearestSourceIndex(x, width, src.width()));
        dst[label * plane + static_cast<std::size_t>(y) * width + x] = T(1);
      }
    }
  }
  return out;
}

template <typename T>
UNet<T>::UNet(const DenoiserConfig& cfg) : cfg_(cfg), store_(cfg.init_seed) {
  cfg_.Validate();
  const int base = cfg_.base_channels;
  const int tdim = cfg_.time_dim();
  const int g = cfg_.norm_groups;
  const int nc = cfg_.num_classes;
  const int hid = cfg_.spade_hidden;
  const bool zi = cfg_.zero_init_output;

  time_fc1_ = Conv<T>(store_, "time.fc1", base, tdim, 1);
  time_fc2_ = Conv<T>(store_, "time.fc2", tdim, tdim, 1);
  conv_in_ = Conv<T>(store_, "in", DenoiserConfig::kInChannels, base, 3);

  std::vector<int> skip_channels = {base};
  int ch = base;
  levels_.resize(cfg_.levels());
  for (int i = 0; i < cfg_.levels(); ++i) {
    Level& lv = levels_[i];
    lv.attention = std::find(cfg_.attention_levels.begin(),
                             cfg_.attention_levels.end(),
                             i) != cfg_.attention_levels.end();
    const int out_ch = base * cfg_.channel_mult[i];
    for (int b = 0; b < cfg_.num_res_blocks; ++b) {
      const std::string name =
          "down" + std::to_string(i) + ".block" + std::to_string(b);
      lv.down_blocks.emplace_back(store_, name, ch, out_ch, tdim, g, false,
                                  nc, hid, zi);
      ch = out_ch;
      if (lv.attention) {
        lv.down_attn.emplace_back(store_, name + ".attn", ch, g, zi);
      }
      skip_channels.push_back(ch);
    }
    if (i + 1 < cfg_.levels()) {
      lv.downsample = Conv<T>(store_, "down" + std::to_string(i) + ".downsample",
                              ch, ch, 3, 2);
      skip_channels.push_back(ch);
    }
  }

  mid1_ = ResBlock<T>(store_, "mid.block0", ch, ch, tdim, g, true, nc, hid, zi);
  mid_attn_ = AttentionBlock<T>(store_, "mid.attn", ch, g, zi);
  mid2_ = ResBlock<T>(store_, "mid.block1", ch, ch, tdim, g, true, nc, hid, zi);

  for (int i = cfg_.levels() - 1; i >= 0; --i) {
    Level& lv = levels_[i];
    const int out_ch = base * cfg_.channel_mult[i];
    for (int b = 0; b <= cfg_.num_res_blocks; ++b) {
      const std::string name =
          "up" + std::to_string(i) + ".block" + std::to_string(b);
      const int skip = skip_channels.back();
      skip_channels.pop_back();
      lv.up_blocks.emplace_back(store_, name, ch + skip, out_ch, tdim, g, true,
                                nc, hid, zi);
      ch = out_ch;
      if (lv.attention) lv.up_attn.emplace_back(store_, name + ".attn", ch, g, zi);
    }
    if (i > 0) {
      lv.upsample_conv =
          Conv<T>(store_, "up" + std::to_string(i) + ".upsample", ch, ch, 3);
    }
  }

  out_norm_ = GroupNormAffine<T>(store_, "out.norm", ch, GroupsFor(ch, g));
  conv_out_ = Conv<T>(store_, "out.conv", ch, DenoiserConfig::kOutChannels, 3,
                      1, PadMode::kZeros, zi);
}

template <typename T>
Var<T> UNet<T>::Forward(Tape<T>& tape, const Var<T>& x,
                        const std::vector<int>& t,
                        const std::vector<SegmentationMap>& maps) const {
  const Tensor<T>& xv = x->value;
  SPIC_REQUIRE(xv.c == DenoiserConfig::kInChannels,
               "UNet: input must have 6 channels, got " + xv.shape_string());
  SPIC_REQUIRE(t.size() == static_cast<std::size_t>(xv.n) &&
                   maps.size() == static_cast<std::size_t>(xv.n),
               "UNet: need one timestep and one map per sample");
  const int mult = cfg_.size_multiple();
  SPIC_REQUIRE(xv.h % mult == 0 && xv.w % mult == 0,
               "UNet: spatial size must be a multiple of " +
                   std::to_string(mult));
  for (const auto& m : maps) {
    SPIC_REQUIRE(m.num_classes() == cfg_.num_classes,
                 "UNet: segmentation n_c does not match model");
  }

  // Conditioning at every resolution, computed once per forward pass.
  std::map<int, Var<T>> seg_at_level;
  for (int i = 0; i < cfg_.levels(); ++i) {
    seg_at_level[i] = MakeVar(OneHotBatch<T>(maps, xv.h >> i, xv.w >> i));
  }

  auto temb = MakeVar(TimestepFeatures<T>(t, cfg_.base_channels));
  temb = time_fc2_(tape, Silu(tape, time_fc1_(tape, temb)));
  const auto temb_act = Silu(tape, temb);
  const Var<T> none;

  std::vector<Var<T>> skips;
  auto h = conv_in_(tape, x);
  skips.push_back(h);
  for (int i = 0; i < cfg_.levels(); ++i) {
    const Level& lv = levels_[i];
    for (int b = 0; b < cfg_.num_res_blocks; ++b) {
      h = lv.down_blocks[b](tape, h, temb_act, none);
      if (lv.attention) h = lv.down_attn[b](tape, h);
      skips.push_back(h);
    }
    if (i + 1 < cfg_.levels()) {
      h = lv.downsample(tape, h);
      skips.push_back(h);
    }
  }

  const auto& low_seg = seg_at_level[cfg_.levels() - 1];
  h = mid1_(tape, h, temb_act, low_seg);
  h = mid_attn_(tape, h);
  h = mid2_(tape, h, temb_act, low_seg);

  for (int i = cfg_.levels() - 1; i >= 0; --i) {
    const Level& lv = levels_[i];
    for (int b = 0; b <= cfg_.num_res_blocks; ++b) {
      h = ConcatChannels(tape, h, skips.back());
      skips.pop_back();
      h = lv.up_blocks[b](tape, h, temb_act, seg_at_level[i]);
      if (lv.attention) h = lv.up_attn[b](tape, h);
    }
    if (i > 0) h = lv.upsample_conv(tape, UpsampleNearest2x(tape, h));
  }
  return conv_out_(tape, Silu(tape, out_norm_(tape, h)));
}

template <typename T>
std::vector<const SpadeNorm<T>*> UNet<T>::SpadeLayers() const {
  std::vector<const SpadeNorm<T>*> out;
  for (const ResBlock<T>* b : {&mid1_, &mid2_}) {
    out.push_back(&b->norm1_spade);
    out.push_back(&b->norm2_spade);
  }
  for (int i = cfg_.levels() - 1; i >= 0; --i) {
    for (const auto& b : levels_[i].up_blocks) {
      out.push_back(&b.norm1_spade);
      out.push_back(&b.norm2_spade);
    }
  }
  return out;
}

template Tensor<float> TimestepFeatures(const std::vector<int>&, int);
template Tensor<double> TimestepFeatures(const std::vector<int>&, int);
template Tensor<float> OneHotBatch(const std::vector<SegmentationMap>&, int, int);
template Tensor<double> OneHotBatch(const std::vector<SegmentationMap>&, int, int);
template class UNet<float>;
template class UNet<double>;

}  // namespace nn
}  // namespace spic
