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

#ifndef SPIC_DIFFUSION_TENSOR_HPP_
#define SPIC_DIFFUSION_TENSOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "spic/core/error.hpp"
#include "spic/core/image.hpp"

namespace spic::nn {

// Dense NCHW tensor. Vectors are stored as [n, c, 1, 1].
template <typename T>
struct Tensor {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<T> data;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_, T fill = T(0))
      : n(n_), c(c_), h(h_), w(w_),
        data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

  std::size_t size() const { return data.size(); }
  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  std::size_t sample_size() const { return plane() * c; }
  bool empty() const { return data.empty(); }
  bool same_shape(const Tensor& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
  std::string shape_string() const {
    return "[" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + "]";
  }

  T* sample(int i) { return data.data() + i * sample_size(); }
  const T* sample(int i) const { return data.data() + i * sample_size(); }
  T& at(int in, int ic, int y, int x) {
    return data[((static_cast<std::size_t>(in) * c + ic) * h + y) * w + x];
  }
  T at(int in, int ic, int y, int x) const {
    return data[((static_cast<std::size_t>(in) * c + ic) * h + y) * w + x];
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out;
    out.n = n;
    out.c = c;
    out.h = h;
    out.w = w;
    out.data.assign(data.begin(), data.end());
    return out;
  }
};

// [1, 3, H, W] view of an RGB raster.
template <typename T, class Tag>
Tensor<T> TensorFromRaster(const BasicRaster<Tag>& r) {
  Tensor<T> t(1, kRgbChannels, r.height(), r.width());
  t.data.assign(r.values().begin(), r.values().end());
  return t;
}

// Concatenates [1, C, H, W] samples along the batch axis.
template <typename T>
Tensor<T> StackBatch(const std::vector<Tensor<T>>& samples) {
  SPIC_REQUIRE(!samples.empty(), "StackBatch: no samples");
  Tensor<T> out(static_cast<int>(samples.size()), samples[0].c, samples[0].h,
                samples[0].w);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SPIC_REQUIRE(samples[i].n == 1 && samples[i].c == out.c &&
                     samples[i].h == out.h && samples[i].w == out.w,
                 "StackBatch: inconsistent sample shapes");
    std::copy(samples[i].data.begin(), samples[i].data.end(),
              out.sample(static_cast<int>(i)));
  }
  return out;
}

}  // namespace spic::nn

#endif  // SPIC_DIFFUSION_TENSOR_HPP_
