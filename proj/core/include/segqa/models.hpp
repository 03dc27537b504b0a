#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "segqa/core.hpp"
#include "segqa/nn/graph.hpp"

namespace segqa {

enum class RegMode { proposed, baseline };

std::string to_string(RegMode mode);
RegMode reg_mode_from_string(const std::string& s);

/// Encoder-decoder with skip connections; 2x down/upsampling per level,
/// sigmoid-bounded single-channel output.
struct RecNetArch {
  int depth = 4;
  int base_width = 16;
  int in_channels = 1;
};

/// Stacked stride-2 convolution feature extractor over a 2-channel input,
/// global average pooling, two hidden fully connected layers, sigmoid scalar.
struct RegNetArch {
  RegMode mode = RegMode::proposed;
  int blocks = 5;
  int base_width = 16;
  int fc1 = 128;
  int fc2 = 64;
  int in_channels = 2;
};

using Architecture = std::variant<RecNetArch, RegNetArch>;

struct ParamTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> data;
};

struct TrainingMeta {
  int epochs_trained = 0;
  std::vector<float> loss_history;      // per-epoch training loss
  std::vector<float> val_loss_history;  // per-epoch validation loss
  uint64_t seed = 0;
  std::string config_hash;
};

/// Parameters plus architecture descriptor plus training metadata.
struct ModelState {
  Architecture architecture;
  std::vector<ParamTensor> params;
  TrainingMeta meta;

  bool is_recnet() const { return std::holds_alternative<RecNetArch>(architecture); }
  bool is_regnet() const { return std::holds_alternative<RegNetArch>(architecture); }
  const RecNetArch& recnet_arch() const;
  const RegNetArch& regnet_arch() const;

  const ParamTensor& param(const std::string& name) const;
  ParamTensor& param(const std::string& name);
  int64_t param_count() const;
};

/// Options for build_regnet beyond what the mode fixes.
struct RegNetOptions {
  int blocks = 5;
  int base_width = 16;
  int fc1 = 128;
  int fc2 = 64;
};

/// Deterministically initialized REC-Net. depth in [2,5], base_width >= 4.
ModelState build_recnet(int depth, int base_width, uint64_t seed, int in_channels = 1);

/// Deterministically initialized quality regressor for the given input mode.
ModelState build_regnet(RegMode mode, uint64_t seed, const RegNetOptions& options = {});

/// Appends the model's forward pass to a graph. Parameters enter the graph
/// as gradient-tracking leaves when trainable, otherwise as constants; their
/// node ids are written to param_ids (ordered as ModelState::params) when
/// non-null.
template <typename T>
typename nn::Graph<T>::Id recnet_forward(nn::Graph<T>& g, const ModelState& model,
                                         typename nn::Graph<T>::Id input, bool trainable = false,
                                         std::vector<typename nn::Graph<T>::Id>* param_ids = nullptr);

template <typename T>
typename nn::Graph<T>::Id regnet_forward(nn::Graph<T>& g, const ModelState& model,
                                         typename nn::Graph<T>::Id input, bool trainable = false,
                                         std::vector<typename nn::Graph<T>::Id>* param_ids = nullptr);

/// I_rec = REC-Net(masked image); output in [0,1], same shape as input.
Image reconstruct(const ModelState& recnet, const Image& masked);

/// Batched reconstruction; input (N,1,n,n), output (N,1,n,n).
nn::Tensor<float> reconstruct_batch(const ModelState& recnet, const nn::Tensor<float>& masked);

/// 2-channel regressor input (I_dif, S_seg) for the proposed mode.
nn::Tensor<float> regressor_input_proposed(const DifferenceImage& dif, const SegMask& seg);

/// 2-channel regressor input (I_in, S_seg) for the baseline mode.
nn::Tensor<float> regressor_input_baseline(const Image& image, const SegMask& seg);

/// Batched regressor forward; input (N,2,n,n), returns N scores in [0,1].
std::vector<float> regnet_predict(const ModelState& regnet, const nn::Tensor<float>& input);

/// Full proposed pipeline: mask -> reconstruct -> difference -> regress.
QualityScore predict_quality(const ModelState& recnet, const ModelState& regnet, const Image& image,
                             const SegMask& seg);

/// Baseline pipeline: regress directly on (I_in, S_seg).
QualityScore predict_quality_baseline(const ModelState& regnet, const Image& image,
                                      const SegMask& seg);

extern template nn::Graph<float>::Id recnet_forward<float>(nn::Graph<float>&, const ModelState&,
                                                           nn::Graph<float>::Id, bool,
                                                           std::vector<nn::Graph<float>::Id>*);
extern template nn::Graph<double>::Id recnet_forward<double>(nn::Graph<double>&, const ModelState&,
                                                             nn::Graph<double>::Id, bool,
                                                             std::vector<nn::Graph<double>::Id>*);
extern template nn::Graph<float>::Id regnet_forward<float>(nn::Graph<float>&, const ModelState&,
                                                           nn::Graph<float>::Id, bool,
                                                           std::vector<nn::Graph<float>::Id>*);
extern template nn::Graph<double>::Id regnet_forward<double>(nn::Graph<double>&, const ModelState&,
                                                             nn::Graph<double>::Id, bool,
                                                             std::vector<nn::Graph<double>::Id>*);

}  // namespace segqa
