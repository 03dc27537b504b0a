#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "segqa/data/manifest.hpp"
#include "segqa/models.hpp"

namespace segqa {

struct CorpusConfig {
  int bins = 10;
  int per_bin = 40;        // quota per bin, per split
  uint64_t seed = 0;
  int attempt_factor = 300;  // attempt budget per split = bins * per_bin * factor
};

struct CorpusResult {
  DatasetManifest manifest;
  std::map<Split, std::vector<int>> bin_counts;
  bool complete = true;        // every bin of every nonempty split filled
  std::string fill_report;     // JSON report, also written next to the manifest
};

/// Builds a quality-graded corpus from a base dataset by drawing randomized
/// degradations per source sample and rejection-sampling into Dice bins until
/// each bin holds >= per_bin candidates per split or the attempt budget runs
/// out (partial corpus plus report in that case). Optional partially trained
/// segmenters join the draw when provided.
CorpusResult build_quality_corpus(const std::filesystem::path& base_manifest_path,
                                  const CorpusConfig& cfg, const std::filesystem::path& out_dir,
                                  const std::vector<const ModelState*>& segmenters = {});

}  // namespace segqa
