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

#ifndef SPIC_DIFFUSION_LAYERS_HPP_
#define SPIC_DIFFUSION_LAYERS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spic/diffusion/ops.hpp"

namespace spic::nn {

// Owns named trainable tensors in registration order.
template <typename T>
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed) : rng_(seed) {}

  // Uniform(-bound, bound) initialization; bound 0 gives zeros.
  Var<T> Create(const std::string& name, int n, int c, int h, int w,
                double bound);
  Var<T> Constant(const std::string& name, int n, int c, int h, int w,
                  T value);

  const std::vector<std::pair<std::string, Var<T>>>& params() const {
    return params_;
  }
  std::size_t num_scalars() const;
  void ZeroGrad();

 private:
  std::mt19937_64 rng_;
  std::vector<std::pair<std::string, Var<T>>> params_;
};

template <typename T>
struct Conv {
  Var<T> weight;
  Var<T> bias;
  int stride = 1;
  PadMode pad = PadMode::kZeros;

  Conv() = default;
  // zero_init produces an all-zero kernel and bias.
  Conv(ParamStore<T>& store, const std::string& name, int cin, int cout,
       int k, int stride = 1, PadMode pad = PadMode::kZeros,
       bool zero_init = false);
  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
    return Conv2d(tape, x, weight, bias, stride, pad);
  }
};

// Group normalization followed by a per-channel affine map.
template <typename T>
struct GroupNormAffine {
  int groups = 1;
  Var<T> gamma;
  Var<T> beta;

  GroupNormAffine() = default;
  GroupNormAffine(ParamStore<T>& store, const std::string& name, int channels,
                  int groups);
  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
    return ScaleShift(tape, GroupNorm(tape, x, groups), gamma, beta);
  }
};

// Spatially-adaptive normalization: parameter-free group norm of the
// features, modulated by scale and shift maps computed from the one-hot
// segmentation at the feature resolution:
//   hidden = relu(conv(one_hot)); out = norm(x) * (1 + gamma(hidden)) +
//   beta(hidden)
// The convolutions replicate edges so a single-class map gives spatially
// constant modulation.
template <typename T>
struct SpadeNorm {
  int groups = 1;
  Conv<T> shared;
  Conv<T> gamma;
  Conv<T> beta;

  SpadeNorm() = default;
  SpadeNorm(ParamStore<T>& store, const std::string& name, int channels,
            int groups, int num_classes, int hidden);
  Var<T> operator()(Tape<T>& tape, const Var<T>& x,
                    const Var<T>& one_hot) const;
  // The modulation maps alone, for inspection.
  std::pair<Var<T>, Var<T>> ModulationMaps(Tape<T>& tape,
                                           const Var<T>& one_hot) const;
};

// Residual block with timestep injection. With SPADE enabled both
// normalizations are SPADE layers conditioned on the segmentation.
template <typename T>
struct ResBlock {
  bool spade = false;
  GroupNormAffine<T> norm1_plain, norm2_plain;
  SpadeNorm<T> norm1_spade, norm2_spade;
  Conv<T> conv1, conv2, time_proj, skip;
  bool has_skip = false;

  ResBlock() = default;
  ResBlock(ParamStore<T>& store, const std::string& name, int cin, int cout,
           int time_dim, int groups, bool spade, int num_classes,
           int spade_hidden, bool zero_init);
  Var<T> operator()(Tape<T>& tape, const Var<T>& x, const Var<T>& temb_act,
                    const Var<T>& one_hot) const;
};

template <typename T>
struct AttentionBlock {
  GroupNormAffine<T> norm;
  Conv<T> qkv, proj;

  AttentionBlock() = default;
  AttentionBlock(ParamStore<T>& store, const std::string& name, int channels,
                 int groups, bool zero_init);
  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const;
};

// Largest divisor of `channels` not exceeding `preferred`.
int GroupsFor(int channels, int preferred);

}  // namespace spic::nn

#endif  // SPIC_DIFFUSION_LAYERS_HPP_
