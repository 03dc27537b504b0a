#pragma once

#include <filesystem>

#include "segqa/models.hpp"

namespace segqa {

/// Writes a checkpoint directory: model.json (architecture + training
/// metadata), index.json (name -> file -> shape) and one raw little-endian
/// float32 file per parameter under params/.
void save_checkpoint(const ModelState& model, const std::filesystem::path& dir);

/// Bit-exact inverse of save_checkpoint.
ModelState load_checkpoint(const std::filesystem::path& dir);

}  // namespace segqa
