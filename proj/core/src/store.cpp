#include "segqa/data/store.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace segqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_sidecar(const fs::path& base, int rows, int cols, const std::string& dtype) {
  json j;
  j["shape"] = {rows, cols};
  j["dtype"] = dtype;
  j["order"] = "C";
  j["endian"] = "little";
  std::ofstream f(base.string() + ".json", std::ios::binary);
  if (!f) throw IoError("cannot write sidecar for " + base.string());
  f << j.dump() << "\n";
}

json read_sidecar(const fs::path& base, const std::string& expect_dtype, int* rows, int* cols) {
  std::ifstream f(base.string() + ".json", std::ios::binary);
  if (!f) throw IoError("cannot read sidecar " + base.string() + ".json");
  json j;
  f >> j;
  const auto shape = j.at("shape").get<std::vector<int>>();
  if (shape.size() != 2) throw IoError("sidecar shape must be 2D: " + base.string());
  const std::string dtype = j.at("dtype").get<std::string>();
  if (dtype != expect_dtype) {
    throw IoError("sidecar dtype '" + dtype + "' != expected '" + expect_dtype + "': " +
                  base.string());
  }
  *rows = shape[0];
  *cols = shape[1];
  return j;
}

template <typename T>
void write_raw(const fs::path& base, const std::vector<T>& data) {
  std::ofstream f(base.string() + ".raw", std::ios::binary);
  if (!f) throw IoError("cannot write " + base.string() + ".raw");
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(T)));
  if (!f) throw IoError("write failed for " + base.string() + ".raw");
}

template <typename T>
std::vector<T> read_raw(const fs::path& base, size_t count) {
  std::ifstream f(base.string() + ".raw", std::ios::binary);
  if (!f) throw IoError("cannot read " + base.string() + ".raw");
  std::vector<T> data(count);
  f.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * sizeof(T)));
  if (f.gcount() != static_cast<std::streamsize>(count * sizeof(T))) {
    throw IoError("raw array truncated: " + base.string() + ".raw");
  }
  return data;
}

}  // namespace

void write_grid(const fs::path& base, const Grid& g) {
  write_raw(base, g.v);
  write_sidecar(base, g.rows, g.cols, "float32");
}

Grid read_grid(const fs::path& base) {
  int rows = 0, cols = 0;
  read_sidecar(base, "float32", &rows, &cols);
  Grid g(rows, cols);
  g.v = read_raw<float>(base, static_cast<size_t>(rows) * cols);
  return g;
}

void write_mask(const fs::path& base, const SegMask& m) {
  write_raw(base, m.labels());
  write_sidecar(base, m.rows(), m.cols(), "uint8");
}

SegMask read_mask(const fs::path& base) {
  int rows = 0, cols = 0;
  read_sidecar(base, "uint8", &rows, &cols);
  return SegMask(rows, cols, read_raw<uint8_t>(base, static_cast<size_t>(rows) * cols));
}

void write_sample(const fs::path& dir, const Image& image, const SegMask& seg_gt,
                  const SegMask& seg_candidate) {
  fs::create_directories(dir);
  write_grid(dir / "image", image.pixels());
  write_mask(dir / "seg_gt", seg_gt);
  write_mask(dir / "seg_candidate", seg_candidate);
}

SampleStore::SampleStore(const fs::path& manifest_path, Split split)
    : SampleStore(load_manifest(manifest_path), manifest_path.parent_path(), split) {}

SampleStore::SampleStore(const DatasetManifest& manifest, const fs::path& manifest_dir,
                         Split split) {
  for (int idx : manifest.indices(split)) {
    const ManifestRecord& r = manifest.records[static_cast<size_t>(idx)];
    const fs::path dir = manifest_dir / r.path;
    Item item{Image(read_grid(dir / "image")), read_mask(dir / "seg_gt"),
              read_mask(dir / "seg_candidate"), r.gt_dice, fs::path(r.path).filename().string(),
              r.source_id};
    const float recomputed = dice(item.candidate, item.gt).value;
    if (recomputed != r.gt_dice) {
      throw ValidationError("sample " + r.path + ": stored gt_dice " + std::to_string(r.gt_dice) +
                            " != recomputed " + std::to_string(recomputed));
    }
    items_.push_back(std::move(item));
  }
}

}  // namespace segqa
