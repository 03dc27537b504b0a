#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "segqa/errors.hpp"

namespace segqa {

enum class Split { train, val, test };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct ManifestRecord {
  std::string path;  // sample directory, relative to the manifest's directory
  std::string source_id;
  Split split = Split::train;
  float gt_dice = 0.0f;
};

/// Index of a dataset on disk. Source ids (patients / synthetic shapes) are
/// disjoint across splits.
struct DatasetManifest {
  uint64_t seed = 0;
  std::string generator_config;  // JSON text describing how the data was made
  std::vector<ManifestRecord> records;

  std::vector<int> indices(Split s) const;
  int count(Split s) const { return static_cast<int>(indices(s).size()); }

  /// Throws ValidationError when a source_id appears in more than one split.
  void check_split_disjointness() const;
};

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace segqa
