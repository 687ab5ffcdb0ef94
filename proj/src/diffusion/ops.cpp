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

#include "spic/diffusion/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace spic::nn {
namespace {

template <typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapR = Eigen::Map<MatR<T>>;
template <typename T>
using CMapR = Eigen::Map<const MatR<T>>;

// Left-to-right sum, independent of buffer alignment.
template <typename T>
T OrderedSum(const T* p, int n) {
  T s = 0;
  for (int i = 0; i < n; ++i) s += p[i];
  return s;
}

template <typename T, typename... Vars>
bool Records(const Tape<T>& tape, const Vars&... vars) {
  return tape.recording() && ((vars && vars->requires_grad) || ...);
}

template <typename T>
bool Wants(const Var<T>& v) {
  return v && v->requires_grad;
}

int OutSize(int in, int k, int stride) {
  const int pad = (k - 1) / 2;
  return (in + 2 * pad - k) / stride + 1;
}

// Source coordinate for a padded tap, or -1 for a zero tap.
inline int SourceIndex(int i, int size, PadMode pad) {
  if (i >= 0 && i < size) return i;
  if (pad == PadMode::kZeros) return -1;
  return std::clamp(i, 0, size - 1);
}

template <typename T>
void Im2Col(const T* x, int cin, int h, int w, int k, int stride, PadMode pad,
            int ho, int wo, T* cols) {
  const int p = (k - 1) / 2;
  const std::size_t l = static_cast<std::size_t>(ho) * wo;
  for (int ci = 0; ci < cin; ++ci) {
    const T* xc = x + static_cast<std::size_t>(ci) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* row = cols + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * l;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = SourceIndex(oy * stride + ky - p, h, pad);
          T* dst = row + static_cast<std::size_t>(oy) * wo;
          if (iy < 0) {
            std::fill(dst, dst + wo, T(0));
            continue;
          }
          const T* src = xc + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = SourceIndex(ox * stride + kx - p, w, pad);
            dst[ox] = ix < 0 ? T(0) : src[ix];
          }
        }
      }
    }
  }
}

template <typename T>
void Col2Im(const T* cols, int cin, int h, int w, int k, int stride,
            PadMode pad, int ho, int wo, T* dx) {
  const int p = (k - 1) / 2;
  const std::size_t l = static_cast<std::size_t>(ho) * wo;
  for (int ci = 0; ci < cin; ++ci) {
    T* xc = dx + static_cast<std::size_t>(ci) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* row =
            cols + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * l;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = SourceIndex(oy * stride + ky - p, h, pad);
          if (iy < 0) continue;
          const T* src = row + static_cast<std::size_t>(oy) * wo;
          T* dst = xc + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = SourceIndex(ox * stride + kx - p, w, pad);
            if (ix >= 0) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

template <typename T>
T Sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

}  // namespace

template <typename T>
void Tape<T>::Backward(const Var<T>& loss) {
  SPIC_REQUIRE(loss->value.size() == 1, "Backward: loss must be a scalar");
  loss->EnsureGrad().data[0] += T(1);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node<T>& node = **it;
    if (node.backward && !node.grad.empty()) node.backward();
  }
  for (auto& node : nodes_) node->backward = nullptr;
  nodes_.clear();
}

template <typename T>
Var<T> Conv2d(Tape<T>& tape, const Var<T>& x, const Var<T>& weight,
              const Var<T>& bias, int stride, PadMode pad) {
  const Tensor<T>& xv = x->value;
  const Tensor<T>& wv = weight->value;
  const int k = wv.h;
  SPIC_REQUIRE(wv.w == k && k % 2 == 1, "Conv2d: kernel must be square, odd");
  SPIC_REQUIRE(wv.c == xv.c, "Conv2d: input channels " +
                                 std::to_string(xv.c) + " vs weight " +
                                 wv.shape_string());
  SPIC_REQUIRE(stride == 1 || stride == 2, "Conv2d: stride must be 1 or 2");
  const int cout = wv.n;
  const int cin = xv.c;
  const int ho = OutSize(xv.h, k, stride);
  const int wo = OutSize(xv.w, k, stride);
  const int ckk = cin * k * k;
  const int l = ho * wo;
  const bool direct = k == 1 && stride == 1;
  if (bias) {
    SPIC_REQUIRE(bias->value.size() == static_cast<std::size_t>(cout),
                 "Conv2d: bias size mismatch");
  }

  Tensor<T> out(xv.n, cout, ho, wo);
  std::vector<T> cols(direct ? 0 : static_cast<std::size_t>(ckk) * l);
  CMapR<T> wm(wv.data.data(), cout, ckk);
  for (int i = 0; i < xv.n; ++i) {
    const T* src = xv.sample(i);
    if (!direct) {
      Im2Col(src, cin, xv.h, xv.w, k, stride, pad, ho, wo, cols.data());
      src = cols.data();
    }
    MapR<T> y(out.sample(i), cout, l);
    y.noalias() = wm * CMapR<T>(src, ckk, l);
    if (bias) {
      for (int co = 0; co < cout; ++co) y.row(co).array() += bias->value.data[co];
    }
  }

  auto result = MakeVar(std::move(out));
  if (Records(tape, x, weight, bias)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x, weight, bias, stride, pad, k, cout, cin, ho, wo,
                        ckk, l, direct]() {
      const Tensor<T>& xv = x->value;
      std::vector<T> cols(direct ? 0 : static_cast<std::size_t>(ckk) * l);
      std::vector<T> dcols(direct ? 0 : static_cast<std::size_t>(ckk) * l);
      CMapR<T> wm(weight->value.data.data(), cout, ckk);
      for (int i = 0; i < xv.n; ++i) {
        CMapR<T> dy(o->grad.sample(i), cout, l);
        if (Wants(bias)) {
          T* db = bias->EnsureGrad().data.data();
          for (int co = 0; co < cout; ++co) db[co] += OrderedSum(dy.row(co).data(), l);
        }
        const T* src = xv.sample(i);
        if (!direct && Wants(weight)) {
          Im2Col(src, cin, xv.h, xv.w, k, stride, pad, ho, wo, cols.data());
          src = cols.data();
        }
        if (Wants(weight)) {
          MapR<T> dw(weight->EnsureGrad().data.data(), cout, ckk);
          dw.noalias() += dy * CMapR<T>(src, ckk, l).transpose();
        }
        if (Wants(x)) {
          T* dx = x->EnsureGrad().sample(i);
          if (direct) {
            MapR<T>(dx, ckk, l).noalias() += wm.transpose() * dy;
          } else {
            MapR<T>(dcols.data(), ckk, l).noalias() = wm.transpose() * dy;
            Col2Im(dcols.data(), cin, xv.h, xv.w, k, stride, pad, ho, wo, dx);
          }
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> GroupNorm(Tape<T>& tape, const Var<T>& x, int groups, T eps) {
  const Tensor<T>& xv = x->value;
  SPIC_REQUIRE(groups >= 1 && xv.c % groups == 0,
               "GroupNorm: channels not divisible by groups");
  const std::size_t group_size = xv.plane() * (xv.c / groups);
  auto stats = std::make_shared<std::vector<T>>(2 * xv.n * groups);
  Tensor<T> out(xv.n, xv.c, xv.h, xv.w);
  for (int i = 0; i < xv.n; ++i) {
    for (int g = 0; g < groups; ++g) {
      const T* src = xv.sample(i) + g * group_size;
      T* dst = out.sample(i) + g * group_size;
      double sum = 0, sq = 0;
      for (std::size_t j = 0; j < group_size; ++j) sum += src[j];
      const double mean = sum / group_size;
      for (std::size_t j = 0; j < group_size; ++j) {
        const double d = src[j] - mean;
        sq += d * d;
      }
      const T rstd = static_cast<T>(1.0 / std::sqrt(sq / group_size + eps));
      const T m = static_cast<T>(mean);
      for (std::size_t j = 0; j < group_size; ++j) dst[j] = (src[j] - m) * rstd;
      (*stats)[2 * (i * groups + g)] = m;
      (*stats)[2 * (i * groups + g) + 1] = rstd;
    }
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, x)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x, groups, group_size, stats]() {
      const Tensor<T>& xv = x->value;
      Tensor<T>& dx = x->EnsureGrad();
      for (int i = 0; i < xv.n; ++i) {
        for (int g = 0; g < groups; ++g) {
          const std::size_t off = i * xv.sample_size() + g * group_size;
          const T m = (*stats)[2 * (i * groups + g)];
          const T rstd = (*stats)[2 * (i * groups + g) + 1];
          const T* src = xv.data.data() + off;
          const T* dy = o->grad.data.data() + off;
          double m1 = 0, m2 = 0;
          for (std::size_t j = 0; j < group_size; ++j) {
            m1 += dy[j];
            m2 += dy[j] * (src[j] - m) * rstd;
          }
          const T a = static_cast<T>(m1 / group_size);
          const T b = static_cast<T>(m2 / group_size);
          T* d = dx.data.data() + off;
          for (std::size_t j = 0; j < group_size; ++j) {
            d[j] += rstd * (dy[j] - a - (src[j] - m) * rstd * b);
          }
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> ScaleShift(Tape<T>& tape, const Var<T>& x, const Var<T>& gamma,
                  const Var<T>& beta) {
  const Tensor<T>& xv = x->value;
  SPIC_REQUIRE(gamma->value.size() == static_cast<std::size_t>(xv.c) &&
                   beta->value.size() == static_cast<std::size_t>(xv.c),
               "ScaleShift: parameter size mismatch");
  Tensor<T> out(xv.n, xv.c, xv.h, xv.w);
  const std::size_t hw = xv.plane();
  for (int i = 0; i < xv.n; ++i) {
    for (int ch = 0; ch < xv.c; ++ch) {
      const T g = gamma->value.data[ch];
      const T b = beta->value.data[ch];
      const T* src = xv.sample(i) + ch * hw;
      T* dst = out.sample(i) + ch * hw;
      for (std::size_t j = 0; j < hw; ++j) dst[j] = src[j] * g + b;
    }
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, x, gamma, beta)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x, gamma, beta]() {
      const Tensor<T>& xv = x->value;
      const std::size_t hw = xv.plane();
      for (int i = 0; i < xv.n; ++i) {
        for (int ch = 0; ch < xv.c; ++ch) {
          const T* dy = o->grad.sample(i) + ch * hw;
          const T* src = xv.sample(i) + ch * hw;
          if (Wants(x)) {
            T* dx = x->EnsureGrad().sample(i) + ch * hw;
            const T g = gamma->value.data[ch];
            for (std::size_t j = 0; j < hw; ++j) dx[j] += dy[j] * g;
          }
          T sg = 0, sb = 0;
          for (std::size_t j = 0; j < hw; ++j) {
            sg += dy[j] * src[j];
            sb += dy[j];
          }
          if (Wants(gamma)) gamma->EnsureGrad().data[ch] += sg;
          if (Wants(beta)) beta->EnsureGrad().data[ch] += sb;
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> Modulate(Tape<T>& tape, const Var<T>& x, const Var<T>& gamma,
                const Var<T>& beta) {
  const Tensor<T>& xv = x->value;
  SPIC_REQUIRE(xv.same_shape(gamma->value) && xv.same_shape(beta->value),
               "Modulate: modulation maps " + gamma->value.shape_string() +
                   " do not match features " + xv.shape_string());
  Tensor<T> out(xv.n, xv.c, xv.h, xv.w);
  const T* g = gamma->value.data.data();
  const T* b = beta->value.data.data();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out.data[j] = xv.data[j] * (T(1) + g[j]) + b[j];
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, x, gamma, beta)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x, gamma, beta]() {
      const std::size_t n = o->grad.size();
      const T* dy = o->grad.data.data();
      if (Wants(x)) {
        T* dx = x->EnsureGrad().data.data();
        const T* g = gamma->value.data.data();
        for (std::size_t j = 0; j < n; ++j) dx[j] += dy[j] * (T(1) + g[j]);
      }
      if (Wants(gamma)) {
        T* dg = gamma->EnsureGrad().data.data();
        const T* xs = x->value.data.data();
        for (std::size_t j = 0; j < n; ++j) dg[j] += dy[j] * xs[j];
      }
      if (Wants(beta)) {
        T* db = beta->EnsureGrad().data.data();
        for (std::size_t j = 0; j < n; ++j) db[j] += dy[j];
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> Add(Tape<T>& tape, const Var<T>& a, const Var<T>& b) {
  SPIC_REQUIRE(a->value.same_shape(b->value), "Add: shape mismatch");
  Tensor<T> out = a->value;
  for (std::size_t j = 0; j < out.size(); ++j) out.data[j] += b->value.data[j];
  auto result = MakeVar(std::move(out));
  if (Records(tape, a, b)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, a, b]() {
      for (const Var<T>* v : {&a, &b}) {
        if (!Wants(*v)) continue;
        T* d = (*v)->EnsureGrad().data.data();
        for (std::size_t j = 0; j < o->grad.size(); ++j) d[j] += o->grad.data[j];
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> AddChannelBias(Tape<T>& tape, const Var<T>& x, const Var<T>& v) {
  const Tensor<T>& xv = x->value;
  SPIC_REQUIRE(v->value.n == xv.n && v->value.c == xv.c &&
                   v->value.plane() == 1,
               "AddChannelBias: bias must be [N, C, 1, 1]");
  Tensor<T> out = xv;
  const std::size_t hw = xv.plane();
  for (int i = 0; i < xv.n; ++i) {
    for (int ch = 0; ch < xv.c; ++ch) {
      const T b = v->value.data[i * xv.c + ch];
      T* dst = out.sample(i) + ch * hw;
      for (std::size_t j = 0; j < hw; ++j) dst[j] += b;
    }
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, x, v)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x, v]() {
      const std::size_t hw = o->grad.plane();
      const int c = o->grad.c;
      for (int i = 0; i < o->grad.n; ++i) {
        for (int ch = 0; ch < c; ++ch) {
          const T* dy = o->grad.sample(i) + ch * hw;
          if (Wants(x)) {
            T* dx = x->EnsureGrad().sample(i) + ch * hw;
            for (std::size_t j = 0; j < hw; ++j) dx[j] += dy[j];
          }
          if (Wants(v)) {
            T s = 0;
            for (std::size_t j = 0; j < hw; ++j) s += dy[j];
            v->EnsureGrad().data[i * c + ch] += s;
          }
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> Silu(Tape<T>& tape, const Var<T>& x) {
  Tensor<T> out = x->value;
  for (T& v : out.data) v = v * Sigmoid(v);
  auto result = MakeVar(std::move(out));
  if (Records(tape, x)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x]() {
      T* dx = x->EnsureGrad().data.data();
      const T* xs = x->value.data.data();
      for (std::size_t j = 0; j < o->grad.size(); ++j) {
        const T s = Sigmoid(xs[j]);
        dx[j] += o->grad.data[j] * s * (T(1) + xs[j] * (T(1) - s));
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> Relu(Tape<T>& tape, const Var<T>& x) {
  Tensor<T> out = x->value;
  for (T& v : out.data) v = std::max(v, T(0));
  auto result = MakeVar(std::move(out));
  if (Records(tape, x)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x]() {
      T* dx = x->EnsureGrad().data.data();
      const T* xs = x->value.data.data();
      for (std::size_t j = 0; j < o->grad.size(); ++j) {
        if (xs[j] > T(0)) dx[j] += o->grad.data[j];
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> ConcatChannels(Tape<T>& tape, const Var<T>& a, const Var<T>& b) {
  const Tensor<T>& av = a->value;
  const Tensor<T>& bv = b->value;
  SPIC_REQUIRE(av.n == bv.n && av.h == bv.h && av.w == bv.w,
               "ConcatChannels: shape mismatch " + av.shape_string() + " vs " +
                   bv.shape_string());
  Tensor<T> out(av.n, av.c + bv.c, av.h, av.w);
  for (int i = 0; i < av.n; ++i) {
    std::copy(av.sample(i), av.sample(i) + av.sample_size(), out.sample(i));
    std::copy(bv.sample(i), bv.sample(i) + bv.sample_size(),
              out.sample(i) + av.sample_size());
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, a, b)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, a, b]() {
      const std::size_t as = a->value.sample_size();
      const std::size_t bs = b->value.sample_size();
      for (int i = 0; i < o->grad.n; ++i) {
        const T* dy = o->grad.sample(i);
        if (Wants(a)) {
          T* d = a->EnsureGrad().sample(i);
          for (std::size_t j = 0; j < as; ++j) d[j] += dy[j];
        }
        if (Wants(b)) {
          T* d = b->EnsureGrad().sample(i);
          for (std::size_t j = 0; j < bs; ++j) d[j] += dy[as + j];
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> UpsampleNearest2x(Tape<T>& tape, const Var<T>& x) {
  const Tensor<T>& xv = x->value;
  Tensor<T> out(xv.n, xv.c, xv.h * 2, xv.w * 2);
  for (int i = 0; i < xv.n; ++i) {
    for (int ch = 0; ch < xv.c; ++ch) {
      for (int y = 0; y < out.h; ++y) {
        for (int col = 0; col < out.w; ++col) {
          out.at(i, ch, y, col) = xv.at(i, ch, y / 2, col / 2);
        }
      }
    }
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, x)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, x]() {
      Tensor<T>& dx = x->EnsureGrad();
      const Tensor<T>& dy = o->grad;
      for (int i = 0; i < dy.n; ++i) {
        for (int ch = 0; ch < dy.c; ++ch) {
          for (int y = 0; y < dy.h; ++y) {
            for (int col = 0; col < dy.w; ++col) {
              dx.at(i, ch, y / 2, col / 2) += dy.at(i, ch, y, col);
            }
          }
        }
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> SpatialAttention(Tape<T>& tape, const Var<T>& qkv) {
  const Tensor<T>& in = qkv->value;
  SPIC_REQUIRE(in.c % 3 == 0, "SpatialAttention: channels must be 3C");
  const int c = in.c / 3;
  const int l = static_cast<int>(in.plane());
  const T scale = T(1) / std::sqrt(static_cast<T>(c));
  Tensor<T> out(in.n, c, in.h, in.w);
  auto probs = std::make_shared<std::vector<MatR<T>>>(in.n);
  for (int i = 0; i < in.n; ++i) {
    CMapR<T> q(in.sample(i), c, l);
    CMapR<T> k(in.sample(i) + static_cast<std::size_t>(c) * l, c, l);
    CMapR<T> v(in.sample(i) + 2 * static_cast<std::size_t>(c) * l, c, l);
    MatR<T> a = scale * (q.transpose() * k);
    for (int r = 0; r < l; ++r) {
      const T mx = a.row(r).maxCoeff();
      a.row(r) = (a.row(r).array() - mx).exp();
      a.row(r) /= OrderedSum(a.row(r).data(), l);
    }
    MapR<T>(out.sample(i), c, l).noalias() = v * a.transpose();
    (*probs)[i] = std::move(a);
  }
  auto result = MakeVar(std::move(out));
  if (Records(tape, qkv)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    result->backward = [o, qkv, probs, c, l, scale]() {
      const Tensor<T>& in = qkv->value;
      Tensor<T>& din = qkv->EnsureGrad();
      for (int i = 0; i < in.n; ++i) {
        const MatR<T>& a = (*probs)[i];
        CMapR<T> q(in.sample(i), c, l);
        CMapR<T> k(in.sample(i) + static_cast<std::size_t>(c) * l, c, l);
        CMapR<T> v(in.sample(i) + 2 * static_cast<std::size_t>(c) * l, c, l);
        CMapR<T> dout(o->grad.sample(i), c, l);
        MapR<T> dq(din.sample(i), c, l);
        MapR<T> dk(din.sample(i) + static_cast<std::size_t>(c) * l, c, l);
        MapR<T> dv(din.sample(i) + 2 * static_cast<std::size_t>(c) * l, c, l);
        dv.noalias() += dout * a;
        MatR<T> da = dout.transpose() * v;
        // Softmax backward, row-wise.
        for (int r = 0; r < l; ++r) {
          T dot = 0;
          for (int j = 0; j < l; ++j) dot += da(r, j) * a(r, j);
          da.row(r) = a.row(r).array() * (da.row(r).array() - dot);
        }
        dq.noalias() += scale * (k * da.transpose());
        dk.noalias() += scale * (q * da);
      }
    };
    tape.Push(result);
  }
  return result;
}

template <typename T>
Var<T> MseLoss(Tape<T>& tape, const Var<T>& pred, const Tensor<T>& target) {
  SPIC_REQUIRE(pred->value.same_shape(target), "MseLoss: shape mismatch");
  double s = 0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double d = static_cast<double>(pred->value.data[j]) - target.data[j];
    s += d * d;
  }
  Tensor<T> out(1, 1, 1, 1, static_cast<T>(s / target.size()));
  auto result = MakeVar(std::move(out));
  if (Records(tape, pred)) {
    result->requires_grad = true;
    Node<T>* o = result.get();
    auto tgt = std::make_shared<Tensor<T>>(target);
    result->backward = [o, pred, tgt]() {
      const T g = o->grad.data[0] * T(2) / static_cast<T>(tgt->size());
      T* d = pred->EnsureGrad().data.data();
      for (std::size_t j = 0; j < tgt->size(); ++j) {
        d[j] += g * (pred->value.data[j] - tgt->data[j]);
      }
    };
    tape.Push(result);
  }
  return result;
}

#define SPIC_INSTANTIATE_OPS(T)                                               \
  template class Tape<T>;                                                     \
  template Var<T> Conv2d(Tape<T>&, const Var<T>&, const Var<T>&,              \
                         const Var<T>&, int, PadMode);                        \
  template Var<T> GroupNorm(Tape<T>&, const Var<T>&, int, T);                 \
  template Var<T> ScaleShift(Tape<T>&, const Var<T>&, const Var<T>&,          \
                             const Var<T>&);                                  \
  template Var<T> Modulate(Tape<T>&, const Var<T>&, const Var<T>&,            \
                           const Var<T>&);                                    \
  template Var<T> Add(Tape<T>&, const Var<T>&, const Var<T>&);                \
  template Var<T> AddChannelBias(Tape<T>&, const Var<T>&, const Var<T>&);     \
  template Var<T> Silu(Tape<T>&, const Var<T>&);                              \
  template Var<T> Relu(Tape<T>&, const Var<T>&);                              \
  template Var<T> ConcatChannels(Tape<T>&, const Var<T>&, const Var<T>&);     \
  template Var<T> UpsampleNearest2x(Tape<T>&, const Var<T>&);                 \
  template Var<T> SpatialAttention(Tape<T>&, const Var<T>&);                  \
  template Var<T> MseLoss(Tape<T>&, const Var<T>&, const Tensor<T>&);

SPIC_INSTANTIATE_OPS(float)
SPIC_INSTANTIATE_OPS(double)

#undef SPIC_INSTANTIATE_OPS

}  // namespace spic::nn
