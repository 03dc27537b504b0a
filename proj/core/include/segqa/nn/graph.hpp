#pragma once

#include <functional>
#include <vector>

#include "segqa/nn/tensor.hpp"

namespace segqa::nn {

struct ConvSpec {
  int stride = 1;
  int pad = 1;
};

/// Define-by-run reverse-mode autodiff tape over dense tensors.
///
/// Build a graph per forward pass, call backward() on a scalar node, then
/// read grad() of any leaf. Single-threaded and fully deterministic: node
/// evaluation order is construction order, gradient accumulation order is
/// the reverse.
template <typename T>
class Graph {
 public:
  using Id = int;

  /// Leaf that never receives a gradient (data, labels, frozen params).
  Id constant(Tensor<T> v);
  /// Leaf that accumulates a gradient during backward().
  Id leaf(Tensor<T> v);

  /// x:(N,Ci,H,W) w:(Co,Ci,kh,kw) b:(Co) -> (N,Co,Ho,Wo)
  Id conv2d(Id x, Id w, Id b, ConvSpec spec);
  /// x:(N,F) w:(O,F) b:(O) -> (N,O)
  Id linear(Id x, Id w, Id b);
  Id relu(Id x);
  Id sigmoid(Id x);
  /// 2x2 max pooling, stride 2; spatial dims must be even.
  Id maxpool2(Id x);
  /// 2x nearest-neighbor upsampling.
  Id upsample_nearest2(Id x);
  /// Concatenate along the channel axis; spatial dims and N must match.
  Id concat_channels(Id a, Id b);
  /// (N,C,H,W) -> (N,C), mean over spatial dims.
  Id global_avg_pool(Id x);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  /// Mean over all elements of (a-b)^2 -> scalar tensor of shape {1}.
  Id mse(Id a, Id b);

  const Tensor<T>& value(Id id) const { return nodes_[id].val; }
  /// Valid after backward(); throws if the node does not track gradients.
  const Tensor<T>& grad(Id id) const;
  bool needs_grad(Id id) const { return nodes_[id].needs_grad; }

  /// Reverse pass from a scalar node. May be called once per graph.
  void backward(Id root);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> val;
    Tensor<T> grad;
    std::function<void()> back;
    bool needs_grad = false;
  };

  Id push(Tensor<T> val, bool needs_grad, std::function<void()> back);
  Tensor<T>& grad_of(Id id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
  std::vector<T> col_buf_;
  bool ran_backward_ = false;
};

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace segqa::nn
