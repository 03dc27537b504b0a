#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "segqa/core.hpp"
#include "segqa/data/manifest.hpp"

namespace segqa {

/// One training/evaluation record.
struct QualitySample {
  Image image;
  SegMask seg_candidate;
  SegMask seg_gt;
  QualityScore gt_dice;
  std::string source_id;
};

/// Raw array files: <base>.raw holds the little-endian payload in C row-major
/// order, <base>.json the sidecar {"shape":[n,n],"dtype":...}.
void write_grid(const std::filesystem::path& base, const Grid& g);
Grid read_grid(const std::filesystem::path& base);
void write_mask(const std::filesystem::path& base, const SegMask& m);
SegMask read_mask(const std::filesystem::path& base);

/// Writes image/seg_gt/seg_candidate arrays into a sample directory.
void write_sample(const std::filesystem::path& dir, const Image& image, const SegMask& seg_gt,
                  const SegMask& seg_candidate);

/// Read access to one split of a dataset. Accessors are per-field so that
/// callers (and tests) can observe exactly which fields a consumer touches.
class ISampleStore {
 public:
  virtual ~ISampleStore() = default;
  virtual int size() const = 0;
  virtual Image image(int i) const = 0;
  virtual SegMask gt_mask(int i) const = 0;
  virtual SegMask candidate_mask(int i) const = 0;
  virtual float gt_dice(int i) const = 0;
  virtual std::string sample_id(int i) const = 0;
  virtual std::string source_id(int i) const = 0;

  QualitySample sample(int i) const {
    return QualitySample{image(i), candidate_mask(i), gt_mask(i), QualityScore(gt_dice(i)),
                         source_id(i)};
  }
};

/// Loads one split of a manifest eagerly into memory. Every record's stored
/// gt_dice is recomputed from its masks at load time and must match exactly.
class SampleStore : public ISampleStore {
 public:
  SampleStore(const std::filesystem::path& manifest_path, Split split);
  SampleStore(const DatasetManifest& manifest, const std::filesystem::path& manifest_dir,
              Split split);

  int size() const override { return static_cast<int>(items_.size()); }
  Image image(int i) const override { return items_.at(i).image; }
  SegMask gt_mask(int i) const override { return items_.at(i).gt; }
  SegMask candidate_mask(int i) const override { return items_.at(i).candidate; }
  float gt_dice(int i) const override { return items_.at(i).gt_dice; }
  std::string sample_id(int i) const override { return items_.at(i).sample_id; }
  std::string source_id(int i) const override { return items_.at(i).source_id; }

 private:
  struct Item {
    Image image;
    SegMask gt;
    SegMask candidate;
    float gt_dice;
    std::string sample_id;
    std::string source_id;
  };
  std::vector<Item> items_;
};

}  // namespace segqa
