#pragma once

#include <filesystem>

#include "segqa/data/manifest.hpp"

namespace segqa {

struct SyntheticConfig {
  int count = 500;
  int image_size = 64;
  uint64_t seed = 0;
  double train_frac = 0.7;
  double val_frac = 0.15;  // remainder goes to test
};

/// Generates textured scenes with an elliptical-ring foreground (and its
/// exact ground-truth mask) under out_dir, returning the saved manifest.
/// Deterministic given the seed; source ids are disjoint across splits.
DatasetManifest generate_synthetic_dataset(const SyntheticConfig& cfg,
                                           const std::filesystem::path& out_dir);

/// Convenience overload mirroring (count, image_size, seed).
DatasetManifest generate_synthetic_dataset(int count, int image_size, uint64_t seed,
                                           const std::filesystem::path& out_dir);

}  // namespace segqa
