#include "segqa/data/corpus.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <random>

#include "segqa/data/degrade.hpp"
#include "segqa/data/store.hpp"
#include "segqa/rng.hpp"

namespace segqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

DegradationSpec draw_spec(std::mt19937_64& rng, int image_size, bool allow_model) {
  const int kinds = allow_model ? 6 : 5;
  DegradationSpec spec;
  spec.kind = static_cast<DegradeKind>(rng() % static_cast<uint64_t>(kinds));
  spec.seed = rng();
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);
  const float u = uni(rng);
  switch (spec.kind) {
    case DegradeKind::dilate: spec.magnitude = 8.0f * u; break;
    case DegradeKind::erode: spec.magnitude = 5.0f * u; break;
    case DegradeKind::translate: spec.magnitude = 0.8f * image_size * u; break;
    case DegradeKind::elastic_warp: spec.magnitude = image_size / 6.0f * u; break;
    case DegradeKind::dropout_holes: spec.magnitude = 8.0f * u; break;
    case DegradeKind::undertrained_model: spec.magnitude = 0.0f; break;
  }
  return spec;
}

}  // namespace

CorpusResult build_quality_corpus(const fs::path& base_manifest_path, const CorpusConfig& cfg,
                                  const fs::path& out_dir,
                                  const std::vector<const ModelState*>& segmenters) {
  if (cfg.bins < 2) throw ValidationError("build_quality_corpus: bins must be >= 2");
  if (cfg.per_bin < 1) throw ValidationError("build_quality_corpus: per_bin must be >= 1");

  const DatasetManifest base = load_manifest(base_manifest_path);
  const fs::path base_dir = base_manifest_path.parent_path();

  CorpusResult result;
  result.manifest.seed = cfg.seed;
  {
    json gc;
    gc["kind"] = "quality_corpus";
    gc["base_manifest"] = base_manifest_path.string();
    gc["bins"] = cfg.bins;
    gc["per_bin"] = cfg.per_bin;
    gc["uses_undertrained_segmenters"] = !segmenters.empty();
    result.manifest.generator_config = gc.dump();
  }

  json report;
  report["bins"] = cfg.bins;
  report["per_bin"] = cfg.per_bin;
  int sample_counter = 0;

  for (Split split : {Split::train, Split::val, Split::test}) {
    SampleStore sources(base, base_dir, split);
    std::vector<int>& counts = result.bin_counts[split];
    counts.assign(static_cast<size_t>(cfg.bins), 0);
    json split_report;

    if (sources.size() == 0) {
      result.complete = false;
      split_report["source_count"] = 0;
      split_report["note"] = "split has no source samples";
      split_report["bin_counts"] = counts;
      report["splits"][to_string(split)] = split_report;
      continue;
    }

    std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<uint64_t>(split) + 101));
    const int64_t budget =
        static_cast<int64_t>(cfg.bins) * cfg.per_bin * std::max(1, cfg.attempt_factor);
    int filled_bins = 0;
    int64_t attempts = 0;
    while (filled_bins < cfg.bins && attempts < budget) {
      ++attempts;
      const int src = static_cast<int>(rng() % static_cast<uint64_t>(sources.size()));
      const SegMask gt = sources.gt_mask(src);
      const Image image = sources.image(src);
      const DegradationSpec spec = draw_spec(rng, image.rows(), !segmenters.empty());

      SegMask candidate = spec.kind == DegradeKind::undertrained_model
                              ? degrade_mask(gt, spec, image,
                                             *segmenters[rng() % segmenters.size()])
                              : degrade_mask(gt, spec);
      const float d = dice(candidate, gt).value;
      const int bin = std::min(static_cast<int>(d * cfg.bins), cfg.bins - 1);
      if (counts[static_cast<size_t>(bin)] >= cfg.per_bin) continue;

      char rel[64];
      std::snprintf(rel, sizeof(rel), "samples/%06d", sample_counter++);
      write_sample(out_dir / rel, image, gt, candidate);
      result.manifest.records.push_back(ManifestRecord{rel, sources.source_id(src), split, d});
      if (++counts[static_cast<size_t>(bin)] == cfg.per_bin) ++filled_bins;
    }

    json unfilled = json::array();
    for (int b = 0; b < cfg.bins; ++b)
      if (counts[static_cast<size_t>(b)] < cfg.per_bin) unfilled.push_back(b);
    if (!unfilled.empty()) result.complete = false;
    split_report["source_count"] = sources.size();
    split_report["attempts"] = attempts;
    split_report["bin_counts"] = counts;
    split_report["unfilled_bins"] = unfilled;
    report["splits"][to_string(split)] = split_report;
  }

  report["complete"] = result.complete;
  result.fill_report = report.dump(2);

  save_manifest(result.manifest, out_dir / "manifest.json");
  std::ofstream f(out_dir / "fill_report.json", std::ios::binary);
  if (!f) throw IoError("cannot write corpus fill report");
  f << result.fill_report << "\n";
  return result;
}

}  // namespace segqa
