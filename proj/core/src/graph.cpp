#include "segqa/nn/graph.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

namespace segqa::nn {

namespace {

template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatRM<T>>;
template <typename T>
using CMapRM = Eigen::Map<const MatRM<T>>;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

// col is K x M row-major with K = Ci*kh*kw, M = N*Ho*Wo.
template <typename T>
void im2col(const T* x, int N, int Ci, int H, int W, int kh, int kw, int stride, int pad,
            int Ho, int Wo, T* col) {
  const int K = Ci * kh * kw;
  const int64_t M = static_cast<int64_t>(N) * Ho * Wo;
  for (int k = 0; k < K; ++k) {
    const int ci = k / (kh * kw);
    const int rem = k % (kh * kw);
    const int ki = rem / kw;
    const int kj = rem % kw;
    T* dst = col + static_cast<int64_t>(k) * M;
    for (int n = 0; n < N; ++n) {
      const T* xc = x + (static_cast<int64_t>(n) * Ci + ci) * H * W;
      for (int ho = 0; ho < Ho; ++ho) {
        const int ii = ho * stride - pad + ki;
        if (ii < 0 || ii >= H) {
          std::fill(dst, dst + Wo, T(0));
          dst += Wo;
          continue;
        }
        const T* xrow = xc + static_cast<int64_t>(ii) * W;
        for (int wo = 0; wo < Wo; ++wo) {
          const int jj = wo * stride - pad + kj;
          *dst++ = (jj >= 0 && jj < W) ? xrow[jj] : T(0);
        }
      }
    }
  }
}

// Scatter-add of the K x M column-gradient matrix back onto dx.
template <typename T>
void col2im_acc(const T* colg, int N, int Ci, int H, int W, int kh, int kw, int stride, int pad,
                int Ho, int Wo, T* dx) {
  const int K = Ci * kh * kw;
  const int64_t M = static_cast<int64_t>(N) * Ho * Wo;
  for (int k = 0; k < K; ++k) {
    const int ci = k / (kh * kw);
    const int rem = k % (kh * kw);
    const int ki = rem / kw;
    const int kj = rem % kw;
    const T* src = colg + static_cast<int64_t>(k) * M;
    for (int n = 0; n < N; ++n) {
      T* xc = dx + (static_cast<int64_t>(n) * Ci + ci) * H * W;
      for (int ho = 0; ho < Ho; ++ho) {
        const int ii = ho * stride - pad + ki;
        if (ii < 0 || ii >= H) {
          src += Wo;
          continue;
        }
        T* xrow = xc + static_cast<int64_t>(ii) * W;
        for (int wo = 0; wo < Wo; ++wo) {
          const int jj = wo * stride - pad + kj;
          if (jj >= 0 && jj < W) xrow[jj] += src[wo];
        }
        src += Wo;
      }
    }
  }
}

}  // namespace

template <typename T>
typename Graph<T>::Id Graph<T>::push(Tensor<T> val, bool needs_grad, std::function<void()> back) {
  nodes_.push_back(Node{std::move(val), Tensor<T>{}, std::move(back), needs_grad});
  return static_cast<Id>(nodes_.size()) - 1;
}

template <typename T>
typename Graph<T>::Id Graph<T>::constant(Tensor<T> v) {
  return push(std::move(v), false, nullptr);
}

template <typename T>
typename Graph<T>::Id Graph<T>::leaf(Tensor<T> v) {
  return push(std::move(v), true, nullptr);
}

template <typename T>
const Tensor<T>& Graph<T>::grad(Id id) const {
  if (!nodes_[id].needs_grad) throw ValidationError("grad(): node does not track gradients");
  if (nodes_[id].grad.data.empty()) throw ValidationError("grad(): backward() has not run");
  return nodes_[id].grad;
}

template <typename T>
void Graph<T>::backward(Id root) {
  require(nodes_[root].val.numel() == 1, "backward(): root must be scalar");
  if (ran_backward_) throw ValidationError("backward(): already ran on this graph");
  ran_backward_ = true;
  for (Id id = 0; id <= root; ++id) {
    if (nodes_[id].needs_grad && nodes_[id].grad.data.empty()) {
      nodes_[id].grad = Tensor<T>(nodes_[id].val.shape);
    }
  }
  if (!nodes_[root].needs_grad) return;  // nothing upstream of the loss is differentiable
  nodes_[root].grad.data[0] = T(1);
  for (Id id = root; id >= 0; --id) {
    if (nodes_[id].back && nodes_[id].needs_grad) nodes_[id].back();
  }
}

template <typename T>
typename Graph<T>::Id Graph<T>::conv2d(Id xid, Id wid, Id bid, ConvSpec sp) {
  const Tensor<T>& x = nodes_[xid].val;
  const Tensor<T>& w = nodes_[wid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(x.rank() == 4, "conv2d: input must be NCHW");
  require(w.rank() == 4, "conv2d: weight must be (Co,Ci,kh,kw)");
  require(b.rank() == 1 && b.dim(0) == w.dim(0), "conv2d: bias must be (Co)");
  require(w.dim(1) == x.dim(1), "conv2d: channel mismatch");
  const int N = x.dim(0), Ci = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int Co = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int Ho = (H + 2 * sp.pad - kh) / sp.stride + 1;
  const int Wo = (W + 2 * sp.pad - kw) / sp.stride + 1;
  require(Ho >= 1 && Wo >= 1, "conv2d: output would be empty");

  const int K = Ci * kh * kw;
  const int64_t M = static_cast<int64_t>(N) * Ho * Wo;
  col_buf_.resize(static_cast<size_t>(K) * M);
  im2col(x.data.data(), N, Ci, H, W, kh, kw, sp.stride, sp.pad, Ho, Wo, col_buf_.data());

  Tensor<T> y({N, Co, Ho, Wo});
  {
    CMapRM<T> W2(w.data.data(), Co, K);
    CMapRM<T> C(col_buf_.data(), K, M);
    MatRM<T> Y2(Co, M);
    Y2.noalias() = W2 * C;
    const int64_t hw = static_cast<int64_t>(Ho) * Wo;
    for (int n = 0; n < N; ++n) {
      for (int co = 0; co < Co; ++co) {
        const T* src = Y2.data() + co * M + n * hw;
        T* dst = y.data.data() + (static_cast<int64_t>(n) * Co + co) * hw;
        const T bias = b.data[co];
        for (int64_t i = 0; i < hw; ++i) dst[i] = src[i] + bias;
      }
    }
  }

  const bool needs = nodes_[xid].needs_grad || nodes_[wid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, wid, bid, yid, sp, N, Ci, H, W, Co, kh, kw, Ho, Wo, K, M]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      const int64_t hw = static_cast<int64_t>(Ho) * Wo;
      MatRM<T> dY2(Co, M);
      for (int n = 0; n < N; ++n) {
        for (int co = 0; co < Co; ++co) {
          const T* src = dy.data.data() + (static_cast<int64_t>(n) * Co + co) * hw;
          T* dst = dY2.data() + co * M + n * hw;
          std::memcpy(dst, src, sizeof(T) * hw);
        }
      }
      if (nodes_[bid].needs_grad) {
        T* db = nodes_[bid].grad.data.data();
        for (int co = 0; co < Co; ++co) db[co] += dY2.row(co).sum();
      }
      if (nodes_[wid].needs_grad || nodes_[xid].needs_grad) {
        col_buf_.resize(static_cast<size_t>(K) * M);
        if (nodes_[wid].needs_grad) {
          im2col(nodes_[xid].val.data.data(), N, Ci, H, W, kh, kw, sp.stride, sp.pad, Ho, Wo,
                 col_buf_.data());
          CMapRM<T> C(col_buf_.data(), K, M);
          MapRM<T> dW2(nodes_[wid].grad.data.data(), Co, K);
          dW2.noalias() += dY2 * C.transpose();
        }
        if (nodes_[xid].needs_grad) {
          CMapRM<T> W2(nodes_[wid].val.data.data(), Co, K);
          MatRM<T> dC(K, M);
          dC.noalias() = W2.transpose() * dY2;
          col2im_acc(dC.data(), N, Ci, H, W, kh, kw, sp.stride, sp.pad, Ho, Wo,
                     nodes_[xid].grad.data.data());
        }
      }
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::linear(Id xid, Id wid, Id bid) {
  const Tensor<T>& x = nodes_[xid].val;
  const Tensor<T>& w = nodes_[wid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(x.rank() == 2, "linear: input must be (N,F)");
  require(w.rank() == 2 && w.dim(1) == x.dim(1), "linear: weight must be (O,F)");
  require(b.rank() == 1 && b.dim(0) == w.dim(0), "linear: bias must be (O)");
  const int N = x.dim(0), F = x.dim(1), O = w.dim(0);

  Tensor<T> y({N, O});
  {
    CMapRM<T> X(x.data.data(), N, F);
    CMapRM<T> Wm(w.data.data(), O, F);
    MapRM<T> Y(y.data.data(), N, O);
    Y.noalias() = X * Wm.transpose();
    for (int n = 0; n < N; ++n)
      for (int o = 0; o < O; ++o) Y(n, o) += b.data[o];
  }

  const bool needs = nodes_[xid].needs_grad || nodes_[wid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, wid, bid, yid, N, F, O]() {
      CMapRM<T> dY(nodes_[yid].grad.data.data(), N, O);
      if (nodes_[xid].needs_grad) {
        CMapRM<T> Wm(nodes_[wid].val.data.data(), O, F);
        MapRM<T> dX(nodes_[xid].grad.data.data(), N, F);
        dX.noalias() += dY * Wm;
      }
      if (nodes_[wid].needs_grad) {
        CMapRM<T> X(nodes_[xid].val.data.data(), N, F);
        MapRM<T> dW(nodes_[wid].grad.data.data(), O, F);
        dW.noalias() += dY.transpose() * X;
      }
      if (nodes_[bid].needs_grad) {
        T* db = nodes_[bid].grad.data.data();
        for (int o = 0; o < O; ++o) db[o] += dY.col(o).sum();
      }
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::relu(Id xid) {
  const Tensor<T>& x = nodes_[xid].val;
  Tensor<T> y(x.shape);
  for (int64_t i = 0; i < x.numel(); ++i) y.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
  const bool needs = nodes_[xid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, yid]() {
      const Tensor<T>& x = nodes_[xid].val;
      const Tensor<T>& dy = nodes_[yid].grad;
      Tensor<T>& dx = nodes_[xid].grad;
      for (int64_t i = 0; i < x.numel(); ++i)
        if (x.data[i] > T(0)) dx.data[i] += dy.data[i];
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::sigmoid(Id xid) {
  const Tensor<T>& x = nodes_[xid].val;
  Tensor<T> y(x.shape);
  for (int64_t i = 0; i < x.numel(); ++i) {
    const T v = x.data[i];
    if (v >= T(0)) {
      y.data[i] = T(1) / (T(1) + std::exp(-v));
    } else {
      const T e = std::exp(v);
      y.data[i] = e / (T(1) + e);
    }
  }
  const bool needs = nodes_[xid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, yid]() {
      const Tensor<T>& y = nodes_[yid].val;
      const Tensor<T>& dy = nodes_[yid].grad;
      Tensor<T>& dx = nodes_[xid].grad;
      for (int64_t i = 0; i < y.numel(); ++i)
        dx.data[i] += dy.data[i] * y.data[i] * (T(1) - y.data[i]);
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::maxpool2(Id xid) {
  const Tensor<T>& x = nodes_[xid].val;
  require(x.rank() == 4, "maxpool2: input must be NCHW");
  const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  require(H % 2 == 0 && W % 2 == 0, "maxpool2: spatial dims must be even");
  const int Ho = H / 2, Wo = W / 2;
  Tensor<T> y({N, C, Ho, Wo});
  auto arg = std::make_shared<std::vector<int64_t>>(y.numel());
  int64_t oi = 0;
  for (int nc = 0; nc < N * C; ++nc) {
    const T* xp = x.data.data() + static_cast<int64_t>(nc) * H * W;
    for (int i = 0; i < Ho; ++i) {
      for (int j = 0; j < Wo; ++j, ++oi) {
        int64_t best = static_cast<int64_t>(2 * i) * W + 2 * j;
        T bv = xp[best];
        const int64_t cand[3] = {best + 1, best + W, best + W + 1};
        for (int64_t c : cand) {
          if (xp[c] > bv) {
            bv = xp[c];
            best = c;
          }
        }
        y.data[oi] = bv;
        (*arg)[oi] = static_cast<int64_t>(nc) * H * W + best;
      }
    }
  }
  const bool needs = nodes_[xid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, yid, arg]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      Tensor<T>& dx = nodes_[xid].grad;
      for (int64_t i = 0; i < dy.numel(); ++i) dx.data[(*arg)[i]] += dy.data[i];
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::upsample_nearest2(Id xid) {
  const Tensor<T>& x = nodes_[xid].val;
  require(x.rank() == 4, "upsample_nearest2: input must be NCHW");
  const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  Tensor<T> y({N, C, 2 * H, 2 * W});
  for (int nc = 0; nc < N * C; ++nc) {
    const T* xp = x.data.data() + static_cast<int64_t>(nc) * H * W;
    T* yp = y.data.data() + static_cast<int64_t>(nc) * 4 * H * W;
    for (int i = 0; i < 2 * H; ++i) {
      const T* xrow = xp + static_cast<int64_t>(i / 2) * W;
      T* yrow = yp + static_cast<int64_t>(i) * 2 * W;
      for (int j = 0; j < 2 * W; ++j) yrow[j] = xrow[j / 2];
    }
  }
  const bool needs = nodes_[xid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, yid, N, C, H, W]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      Tensor<T>& dx = nodes_[xid].grad;
      for (int nc = 0; nc < N * C; ++nc) {
        const T* dyp = dy.data.data() + static_cast<int64_t>(nc) * 4 * H * W;
        T* dxp = dx.data.data() + static_cast<int64_t>(nc) * H * W;
        for (int i = 0; i < 2 * H; ++i) {
          const T* dyrow = dyp + static_cast<int64_t>(i) * 2 * W;
          T* dxrow = dxp + static_cast<int64_t>(i / 2) * W;
          for (int j = 0; j < 2 * W; ++j) dxrow[j / 2] += dyrow[j];
        }
      }
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::concat_channels(Id aid, Id bid) {
  const Tensor<T>& a = nodes_[aid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(a.rank() == 4 && b.rank() == 4, "concat_channels: inputs must be NCHW");
  require(a.dim(0) == b.dim(0) && a.dim(2) == b.dim(2) && a.dim(3) == b.dim(3),
          "concat_channels: N/H/W mismatch");
  const int N = a.dim(0), Ca = a.dim(1), Cb = b.dim(1), H = a.dim(2), W = a.dim(3);
  const int64_t hw = static_cast<int64_t>(H) * W;
  Tensor<T> y({N, Ca + Cb, H, W});
  for (int n = 0; n < N; ++n) {
    std::memcpy(y.data.data() + static_cast<int64_t>(n) * (Ca + Cb) * hw,
                a.data.data() + static_cast<int64_t>(n) * Ca * hw, sizeof(T) * Ca * hw);
    std::memcpy(y.data.data() + (static_cast<int64_t>(n) * (Ca + Cb) + Ca) * hw,
                b.data.data() + static_cast<int64_t>(n) * Cb * hw, sizeof(T) * Cb * hw);
  }
  const bool needs = nodes_[aid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, aid, bid, yid, N, Ca, Cb, hw]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      for (int n = 0; n < N; ++n) {
        const T* da = dy.data.data() + static_cast<int64_t>(n) * (Ca + Cb) * hw;
        const T* db = da + static_cast<int64_t>(Ca) * hw;
        if (nodes_[aid].needs_grad) {
          T* dst = nodes_[aid].grad.data.data() + static_cast<int64_t>(n) * Ca * hw;
          for (int64_t i = 0; i < Ca * hw; ++i) dst[i] += da[i];
        }
        if (nodes_[bid].needs_grad) {
          T* dst = nodes_[bid].grad.data.data() + static_cast<int64_t>(n) * Cb * hw;
          for (int64_t i = 0; i < Cb * hw; ++i) dst[i] += db[i];
        }
      }
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::global_avg_pool(Id xid) {
  const Tensor<T>& x = nodes_[xid].val;
  require(x.rank() == 4, "global_avg_pool: input must be NCHW");
  const int N = x.dim(0), C = x.dim(1);
  const int64_t hw = static_cast<int64_t>(x.dim(2)) * x.dim(3);
  Tensor<T> y({N, C});
  for (int nc = 0; nc < N * C; ++nc) {
    const T* xp = x.data.data() + nc * hw;
    T s = T(0);
    for (int64_t i = 0; i < hw; ++i) s += xp[i];
    y.data[nc] = s / static_cast<T>(hw);
  }
  const bool needs = nodes_[xid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, xid, yid, N, C, hw]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      Tensor<T>& dx = nodes_[xid].grad;
      for (int nc = 0; nc < N * C; ++nc) {
        const T g = dy.data[nc] / static_cast<T>(hw);
        T* dxp = dx.data.data() + nc * hw;
        for (int64_t i = 0; i < hw; ++i) dxp[i] += g;
      }
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::add(Id aid, Id bid) {
  const Tensor<T>& a = nodes_[aid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(a.shape == b.shape, "add: shape mismatch");
  Tensor<T> y(a.shape);
  for (int64_t i = 0; i < a.numel(); ++i) y.data[i] = a.data[i] + b.data[i];
  const bool needs = nodes_[aid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, aid, bid, yid]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      if (nodes_[aid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[aid].grad.data[i] += dy.data[i];
      if (nodes_[bid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[bid].grad.data[i] += dy.data[i];
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::sub(Id aid, Id bid) {
  const Tensor<T>& a = nodes_[aid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(a.shape == b.shape, "sub: shape mismatch");
  Tensor<T> y(a.shape);
  for (int64_t i = 0; i < a.numel(); ++i) y.data[i] = a.data[i] - b.data[i];
  const bool needs = nodes_[aid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, aid, bid, yid]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      if (nodes_[aid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[aid].grad.data[i] += dy.data[i];
      if (nodes_[bid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[bid].grad.data[i] -= dy.data[i];
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::mul(Id aid, Id bid) {
  const Tensor<T>& a = nodes_[aid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(a.shape == b.shape, "mul: shape mismatch");
  Tensor<T> y(a.shape);
  for (int64_t i = 0; i < a.numel(); ++i) y.data[i] = a.data[i] * b.data[i];
  const bool needs = nodes_[aid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, aid, bid, yid]() {
      const Tensor<T>& dy = nodes_[yid].grad;
      const Tensor<T>& a = nodes_[aid].val;
      const Tensor<T>& b = nodes_[bid].val;
      if (nodes_[aid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[aid].grad.data[i] += dy.data[i] * b.data[i];
      if (nodes_[bid].needs_grad)
        for (int64_t i = 0; i < dy.numel(); ++i) nodes_[bid].grad.data[i] += dy.data[i] * a.data[i];
    };
  }
  return yid;
}

template <typename T>
typename Graph<T>::Id Graph<T>::mse(Id aid, Id bid) {
  const Tensor<T>& a = nodes_[aid].val;
  const Tensor<T>& b = nodes_[bid].val;
  require(a.shape == b.shape, "mse: shape mismatch");
  const int64_t n = a.numel();
  require(n > 0, "mse: empty tensors");
  T s = T(0);
  for (int64_t i = 0; i < n; ++i) {
    const T d = a.data[i] - b.data[i];
    s += d * d;
  }
  Tensor<T> y({1});
  y.data[0] = s / static_cast<T>(n);
  const bool needs = nodes_[aid].needs_grad || nodes_[bid].needs_grad;
  Id yid = push(std::move(y), needs, nullptr);
  if (needs) {
    nodes_[yid].back = [this, aid, bid, yid, n]() {
      const T g = nodes_[yid].grad.data[0] * T(2) / static_cast<T>(n);
      const Tensor<T>& a = nodes_[aid].val;
      const Tensor<T>& b = nodes_[bid].val;
      if (nodes_[aid].needs_grad)
        for (int64_t i = 0; i < n; ++i) nodes_[aid].grad.data[i] += g * (a.data[i] - b.data[i]);
      if (nodes_[bid].needs_grad)
        for (int64_t i = 0; i < n; ++i) nodes_[bid].grad.data[i] -= g * (a.data[i] - b.data[i]);
    };
  }
  return yid;
}

template class Graph<float>;
template class Graph<double>;

}  // namespace segqa::nn
