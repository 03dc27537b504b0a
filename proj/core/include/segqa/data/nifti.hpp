#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "segqa/errors.hpp"

namespace segqa {

/// A 3D volume loaded from a NIfTI-1 file, values already scaled by
/// scl_slope/scl_inter. Data is x-fastest (NIfTI order).
struct NiftiVolume {
  int nx = 0, ny = 0, nz = 0;
  std::vector<float> data;
  float dx = 1.0f, dy = 1.0f, dz = 1.0f;

  float at(int x, int y, int z) const {
    return data[(static_cast<size_t>(z) * ny + y) * nx + x];
  }
  float& at(int x, int y, int z) { return data[(static_cast<size_t>(z) * ny + y) * nx + x]; }
};

/// Reads a .nii or .nii.gz single-file NIfTI-1 volume (3D, or 4D with one
/// timepoint). Supports uint8/int8/int16/uint16/int32/uint32/float32/float64
/// payloads and byte-swapped headers.
NiftiVolume read_nifti(const std::filesystem::path& path);

/// Writes a minimal little-endian NIfTI-1 file (float32, or uint8 when
/// as_uint8). Gzip-compressed when the path ends in .gz.
void write_nifti(const std::filesystem::path& path, const NiftiVolume& vol, bool as_uint8 = false);

}  // namespace segqa
