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

#include "spic/diffusion/layers.hpp"

#include <cmath>

namespace spic::nn {

int GroupsFor(int channels, int preferred) {
  for (int g = std::min(preferred, channels); g > 1; --g) {
    if (channels % g == 0) return g;
  }
  return 1;
}

template <typename T>
Var<T> ParamStore<T>::Create(const std::string& name, int n, int c, int h,
                             int w, double bound) {
  Tensor<T> t(n, c, h, w);
  if (bound > 0) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (T& v : t.data) v = static_cast<T>(dist(rng_));
  }
  auto var = MakeVar(std::move(t), true);
  params_.emplace_back(name, var);
  return var;
}

template <typename T>
Var<T> ParamStore<T>::Constant(const std::string& name, int n, int c, int h,
                               int w, T value) {
  auto var = MakeVar(Tensor<T>(n, c, h, w, value), true);
  params_.emplace_back(name, var);
  return var;
}

template <typename T>
std::size_t ParamStore<T>::num_scalars() const {
  std::size_t total = 0;
  for (const auto& [name, p] : params_) total += p->value.size();
  return total;
}

template <typename T>
void ParamStore<T>::ZeroGrad() {
  for (auto& [name, p] : params_) p->grad = Tensor<T>();
}

template <typename T>
Conv<T>::Conv(ParamStore<T>& store, const std::string& name, int cin,
              int cout, int k, int stride_, PadMode pad_, bool zero_init)
    : stride(stride_), pad(pad_) {
  const double bound = zero_init ? 0.0 : 1.0 / std::sqrt(cin * k * k);
  weight = store.Create(name + ".weight", cout, cin, k, k, bound);
  bias = store.Create(name + ".bias", 1, cout, 1, 1, bound);
}

template <typename T>
GroupNormAffine<T>::GroupNormAffine(ParamStore<T>& store,
                                    const std::string& name, int channels,
                                    int groups_)
    : groups(groups_) {
  gamma = store.Constant(name + ".gamma", 1, channels, 1, 1, T(1));
  beta = store.Constant(name + ".beta", 1, channels, 1, 1, T(0));
}

template <typename T>
SpadeNorm<T>::SpadeNorm(ParamStore<T>& store, const std::string& name,
                        int channels, int groups_, int num_classes, int hidden)
    : groups(groups_),
      shared(store, name + ".shared", num_classes, hidden, 3, 1,
             PadMode::kReplicate),
      gamma(store, name + ".gamma", hidden, channels, 3, 1,
            PadMode::kReplicate),
      beta(store, name + ".beta", hidden, channels, 3, 1,
           PadMode::kReplicate) {}

template <typename T>
std::pair<Var<T>, Var<T>> SpadeNorm<T>::ModulationMaps(
    Tape<T>& tape, const Var<T>& one_hot) const {
  auto hidden = Relu(tape, shared(tape, one_hot));
  return {gamma(tape, hidden), beta(tape, hidden)};
}

template <typename T>
Var<T> SpadeNorm<T>::operator()(Tape<T>& tape, const Var<T>& x,
                                const Var<T>& one_hot) const {
  SPIC_REQUIRE(one_hot->value.h == x->value.h && one_hot->value.w == x->value.w,
               "SpadeNorm: segmentation is " + one_hot->value.shape_string() +
                   " but features are " + x->value.shape_string());
  auto [g, b] = ModulationMaps(tape, one_hot);
  if (g->value.n != x->value.n) {
    internal::ThrowInvalid("SpadeNorm: batch size mismatch");
  }
  return Modulate(tape, GroupNorm(tape, x, groups), g, b);
}

template <typename T>
ResBlock<T>::ResBlock(ParamStore<T>& store, const std::string& name, int cin,
                      int cout, int time_dim, int groups_pref, bool spade_,
                      int num_classes, int spade_hidden, bool zero_init)
    : spade(spade_) {
  if (spade) {
    norm1_spade = SpadeNorm<T>(store, name + ".norm1", cin,
                               GroupsFor(cin, groups_pref), num_classes,
                               spade_hidden);
  } else {
    norm1_plain = GroupNormAffine<T>(store, name + ".norm1", cin,
                                     GroupsFor(cin, groups_pref));
  }
  conv1 = Conv<T>(store, name + ".conv1", cin, cout, 3);
  time_proj = Conv<T>(store, name + ".time_proj", time_dim, cout, 1);
  if (spade) {
    norm2_spade = SpadeNorm<T>(store, name + ".norm2", cout,
                               GroupsFor(cout, groups_pref), num_classes,
                               spade_hidden);
  } else {
    norm2_plain = GroupNormAffine<T>(store, name + ".norm2", cout,
                                     GroupsFor(cout, groups_pref));
  }
  conv2 = Conv<T>(store, name + ".conv2", cout, cout, 3, 1, PadMode::kZeros,
                  zero_init);
  has_skip = cin != cout;
  if (has_skip) skip = Conv<T>(store, name + ".skip", cin, cout, 1);
}

template <typename T>
Var<T> ResBlock<T>::operator()(Tape<T>& tape, const Var<T>& x,
                               const Var<T>& temb_act,
                               const Var<T>& one_hot) const {
  auto h = spade ? norm1_spade(tape, x, one_hot) : norm1_plain(tape, x);
  h = conv1(tape, Silu(tape, h));
  h = AddChannelBias(tape, h, time_proj(tape, temb_act));
  h = spade ? norm2_spade(tape, h, one_hot) : norm2_plain(tape, h);
  h = conv2(tape, Silu(tape, h));
  return Add(tape, has_skip ? skip(tape, x) : x, h);
}

template <typename T>
AttentionBlock<T>::AttentionBlock(ParamStore<T>& store,
                                  const std::string& name, int channels,
                                  int groups, bool zero_init)
    : norm(store, name + ".norm", channels, GroupsFor(channels, groups)),
      qkv(store, name + ".qkv", channels, 3 * channels, 1),
      proj(store, name + ".proj", channels, channels, 1, 1, PadMode::kZeros,
           zero_init) {}

template <typename T>
Var<T> AttentionBlock<T>::operator()(Tape<T>& tape, const Var<T>& x) const {
  auto h = SpatialAttention(tape, qkv(tape, norm(tape, x)));
  return Add(tape, x, proj(tape, h));
}

template class ParamStore<float>;
template class ParamStore<double>;
template struct Conv<float>;
template struct Conv<double>;
template struct GroupNormAffine<float>;
template struct GroupNormAffine<double>;
template struct SpadeNorm<float>;
template struct SpadeNorm<double>;
template struct ResBlock<float>;
template struct ResBlock<double>;
template struct AttentionBlock<float>;
template struct AttentionBlock<double>;

}  // namespace spic::nn
