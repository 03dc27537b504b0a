#pragma once

#include <filesystem>
#include <optional>

#include "segqa/data/store.hpp"
#include "segqa/models.hpp"

namespace segqa {

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 16;
  float learning_rate = 1e-3f;
  uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;
  std::optional<int> early_stop_patience;
};

/// Trains REC-Net on (ground-truth-masked image -> original image) pairs with
/// mean squared reconstruction error. Candidate segmentations are never read.
/// Returns the lowest-validation-loss parameters with full loss history.
/// When run_dir is set, writes config.json, metrics.csv and best/last
/// checkpoints there.
ModelState train_recnet(ModelState model, const ISampleStore& train, const ISampleStore& val,
                        const TrainConfig& cfg,
                        const std::optional<std::filesystem::path>& run_dir = std::nullopt);

/// Trains a quality regressor on (regressor input -> gt_dice) pairs with mean
/// squared error. Proposed mode requires a trained REC-Net whose parameters
/// stay frozen: difference images are precomputed once, so no gradient can
/// reach it. Baseline mode ignores recnet.
ModelState train_regressor(ModelState model, const ModelState* recnet, const ISampleStore& train,
                           const ISampleStore& val, const TrainConfig& cfg,
                           const std::optional<std::filesystem::path>& run_dir = std::nullopt);

/// Regressor inputs for every sample of a store, in store order. Proposed
/// mode masks with the candidate, reconstructs, and pairs the difference
/// image with the candidate mask; baseline pairs the image with the mask.
std::vector<nn::Tensor<float>> regressor_inputs_for_store(const ModelState* recnet, RegMode mode,
                                                          const ISampleStore& store);

/// Batched quality predictions for every sample of a store, in store order.
std::vector<float> predict_store(const ModelState& regnet, const ModelState* recnet,
                                 const ISampleStore& store);

}  // namespace segqa
