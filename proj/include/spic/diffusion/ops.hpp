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

#ifndef SPIC_DIFFUSION_OPS_HPP_
#define SPIC_DIFFUSION_OPS_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "spic/diffusion/tensor.hpp"

namespace spic::nn {

// Reverse-mode automatic differentiation on a tape.
//
// Every op returns a fresh node. When the tape records and some input
// requires a gradient, the op appends its node together with a closure that
// accumulates input gradients from the node's gradient. Parameters are nodes
// created outside any tape with requires_grad set; their gradients
// accumulate across Backward calls until cleared.
template <typename T>
struct Node {
  Tensor<T> value;
  Tensor<T> grad;
  bool requires_grad = false;
  std::function<void()> backward;

  Tensor<T>& EnsureGrad() {
    if (grad.empty()) grad = Tensor<T>(value.n, value.c, value.h, value.w);
    return grad;
  }
};

template <typename T>
using Var = std::shared_ptr<Node<T>>;

template <typename T>
Var<T> MakeVar(Tensor<T> value, bool requires_grad = false) {
  auto v = std::make_shared<Node<T>>();
  v->value = std::move(value);
  v->requires_grad = requires_grad;
  return v;
}

template <typename T>
class Tape {
 public:
  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }
  void Push(const Var<T>& v) { nodes_.push_back(v); }

  // Seeds d(loss)/d(loss) = 1 for a single-element loss and runs every
  // recorded closure in reverse order. The tape is cleared afterwards.
  void Backward(const Var<T>& loss);

 private:
  bool record_;
  std::vector<Var<T>> nodes_;
};

enum class PadMode { kZeros, kReplicate };

// 2-D cross-correlation with 'same'-style padding (K - 1) / 2.
// weight: [Cout, Cin, K, K]; bias: [1, Cout, 1, 1] or null; K odd.
template <typename T>
Var<T> Conv2d(Tape<T>& tape, const Var<T>& x, const Var<T>& weight,
              const Var<T>& bias, int stride = 1,
              PadMode pad = PadMode::kZeros);

// Parameter-free group normalization over (C / groups, H, W).
template <typename T>
Var<T> GroupNorm(Tape<T>& tape, const Var<T>& x, int groups,
                 T eps = T(1e-5));

// x * gamma[c] + beta[c], gamma and beta of shape [1, C, 1, 1].
template <typename T>
Var<T> ScaleShift(Tape<T>& tape, const Var<T>& x, const Var<T>& gamma,
                  const Var<T>& beta);

// Spatially varying modulation x * (1 + gamma) + beta, all shapes equal.
template <typename T>
Var<T> Modulate(Tape<T>& tape, const Var<T>& x, const Var<T>& gamma,
                const Var<T>& beta);

template <typename T>
Var<T> Add(Tape<T>& tape, const Var<T>& a, const Var<T>& b);

// x [N, C, H, W] + v [N, C, 1, 1] broadcast over space.
template <typename T>
Var<T> AddChannelBias(Tape<T>& tape, const Var<T>& x, const Var<T>& v);

template <typename T>
Var<T> Silu(Tape<T>& tape, const Var<T>& x);

template <typename T>
Var<T> Relu(Tape<T>& tape, const Var<T>& x);

template <typename T>
Var<T> ConcatChannels(Tape<T>& tape, const Var<T>& a, const Var<T>& b);

template <typename T>
Var<T> UpsampleNearest2x(Tape<T>& tape, const Var<T>& x);

// Single-head dot-product self-attention over spatial positions.
// qkv: [N, 3C, H, W] holding queries, keys and values; returns [N, C, H, W].
template <typename T>
Var<T> SpatialAttention(Tape<T>& tape, const Var<T>& qkv);

// Mean of squared differences; target is a constant.
template <typename T>
Var<T> MseLoss(Tape<T>& tape, const Var<T>& pred, const Tensor<T>& target);

}  // namespace spic::nn

#endif  // SPIC_DIFFUSION_OPS_HPP_
