#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "segqa/data/manifest.hpp"

namespace segqa {

struct AcdcConfig {
  int lvm_label = 2;  // challenge convention for left-ventricular myocardium
  int image_size = 128;
  uint64_t split_seed = 0;
  double train_frac = 0.7;
  double val_frac = 0.15;
};

/// Ingests an ACDC-style directory tree (patient*/ with *_frameXX.nii.gz and
/// *_frameXX_gt.nii.gz volumes): extracts 2D short-axis slices whose LVM
/// label is nonempty, center-crops/pads them to image_size, min-max
/// normalizes, and writes samples plus a patient-level-split manifest.
/// Patients without any LVM slice are skipped with a warning.
DatasetManifest ingest_acdc(const std::filesystem::path& root, const AcdcConfig& cfg,
                            const std::filesystem::path& out_dir,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace segqa
