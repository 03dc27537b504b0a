#include "segqa/data/manifest.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <set>

namespace segqa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  throw ValidationError("invalid split value");
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split '" + s + "' (expected train|val|test)");
}

std::vector<int> DatasetManifest::indices(Split s) const {
  std::vector<int> out;
  for (size_t i = 0; i < records.size(); ++i)
    if (records[i].split == s) out.push_back(static_cast<int>(i));
  return out;
}

void DatasetManifest::check_split_disjointness() const {
  std::map<std::string, Split> seen;
  for (const auto& r : records) {
    auto [it, inserted] = seen.emplace(r.source_id, r.split);
    if (!inserted && it->second != r.split) {
      throw ValidationError("source_id '" + r.source_id + "' appears in splits " +
                            to_string(it->second) + " and " + to_string(r.split));
    }
  }
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  m.check_split_disjointness();
  json j;
  j["seed"] = m.seed;
  j["generator_config"] = m.generator_config.empty() ? json::object() : json::parse(m.generator_config);
  j["records"] = json::array();
  for (const auto& r : m.records) {
    j["records"].push_back({{"path", r.path},
                            {"source_id", r.source_id},
                            {"split", to_string(r.split)},
                            {"gt_dice", r.gt_dice}});
  }
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write manifest " + path.string());
  f << j.dump(2) << "\n";
  if (!f) throw IoError("write failed for manifest " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read manifest " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw IoError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  DatasetManifest m;
  m.seed = j.at("seed").get<uint64_t>();
  m.generator_config = j.at("generator_config").dump();
  for (const auto& rj : j.at("records")) {
    ManifestRecord r;
    r.path = rj.at("path").get<std::string>();
    r.source_id = rj.at("source_id").get<std::string>();
    r.split = split_from_string(rj.at("split").get<std::string>());
    r.gt_dice = rj.at("gt_dice").get<float>();
    m.records.push_back(std::move(r));
  }
  m.check_split_disjointness();
  return m;
}

}  // namespace segqa
