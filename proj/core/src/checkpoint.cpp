#include "segqa/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace segqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json arch_to_json(const Architecture& arch) {
  json j;
  if (const auto* rec = std::get_if<RecNetArch>(&arch)) {
    j["family"] = "recnet";
    j["depth"] = rec->depth;
    j["base_width"] = rec->base_width;
    j["in_channels"] = rec->in_channels;
  } else {
    const auto& reg = std::get<RegNetArch>(arch);
    j["family"] = "regnet";
    j["mode"] = to_string(reg.mode);
    j["blocks"] = reg.blocks;
    j["base_width"] = reg.base_width;
    j["fc1"] = reg.fc1;
    j["fc2"] = reg.fc2;
    j["in_channels"] = reg.in_channels;
  }
  return j;
}

Architecture arch_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "recnet") {
    RecNetArch a;
    a.depth = j.at("depth").get<int>();
    a.base_width = j.at("base_width").get<int>();
    a.in_channels = j.at("in_channels").get<int>();
    return a;
  }
  if (family == "regnet") {
    RegNetArch a;
    a.mode = reg_mode_from_string(j.at("mode").get<std::string>());
    a.blocks = j.at("blocks").get<int>();
    a.base_width = j.at("base_width").get<int>();
    a.fc1 = j.at("fc1").get<int>();
    a.fc2 = j.at("fc2").get<int>();
    a.in_channels = j.at("in_channels").get<int>();
    return a;
  }
  throw IoError("checkpoint: unknown model family '" + family + "'");
}

std::string param_file_name(size_t index, const std::string& name) {
  std::string sanitized = name;
  for (char& c : sanitized)
    if (c == '.' || c == '/') c = '_';
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%04zu_", index);
  return std::string(buf) + sanitized + ".f32";
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  f << text;
  if (!f) throw IoError("write failed for " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot read " + p.string());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

void save_checkpoint(const ModelState& model, const fs::path& dir) {
  fs::create_directories(dir / "params");

  json meta;
  meta["architecture"] = arch_to_json(model.architecture);
  meta["training_meta"] = {
      {"epochs_trained", model.meta.epochs_trained},
      {"loss_history", model.meta.loss_history},
      {"val_loss_history", model.meta.val_loss_history},
      {"seed", model.meta.seed},
      {"config_hash", model.meta.config_hash},
  };
  meta["format_version"] = 1;
  write_file(dir / "model.json", meta.dump(2) + "\n");

  json index;
  index["params"] = json::array();
  for (size_t i = 0; i < model.params.size(); ++i) {
    const ParamTensor& p = model.params[i];
    const std::string file = param_file_name(i, p.name);
    index["params"].push_back({{"name", p.name}, {"file", "params/" + file}, {"shape", p.shape}});
    std::ofstream f(dir / "params" / file, std::ios::binary);
    if (!f) throw IoError("cannot write parameter file " + file);
    f.write(reinterpret_cast<const char*>(p.data.data()),
            static_cast<std::streamsize>(p.data.size() * sizeof(float)));
    if (!f) throw IoError("write failed for parameter file " + file);
  }
  write_file(dir / "index.json", index.dump(2) + "\n");
}

ModelState load_checkpoint(const fs::path& dir) {
  if (!fs::exists(dir / "model.json")) {
    throw IoError("checkpoint not found at " + dir.string() + " (no model.json)");
  }
  const json meta = json::parse(read_file(dir / "model.json"));
  const json index = json::parse(read_file(dir / "index.json"));

  ModelState m;
  m.architecture = arch_from_json(meta.at("architecture"));
  const json& tm = meta.at("training_meta");
  m.meta.epochs_trained = tm.at("epochs_trained").get<int>();
  m.meta.loss_history = tm.at("loss_history").get<std::vector<float>>();
  m.meta.val_loss_history = tm.at("val_loss_history").get<std::vector<float>>();
  m.meta.seed = tm.at("seed").get<uint64_t>();
  m.meta.config_hash = tm.at("config_hash").get<std::string>();

  for (const auto& entry : index.at("params")) {
    ParamTensor p;
    p.name = entry.at("name").get<std::string>();
    p.shape = entry.at("shape").get<std::vector<int>>();
    const fs::path file = dir / entry.at("file").get<std::string>();
    std::ifstream f(file, std::ios::binary);
    if (!f) throw IoError("cannot read parameter file " + file.string());
    const int64_t count = nn::numel(p.shape);
    p.data.resize(static_cast<size_t>(count));
    f.read(reinterpret_cast<char*>(p.data.data()), static_cast<std::streamsize>(count * sizeof(float)));
    if (f.gcount() != static_cast<std::streamsize>(count * sizeof(float))) {
      throw IoError("parameter file truncated: " + file.string());
    }
    m.params.push_back(std::move(p));
  }
  return m;
}

}  // namespace segqa
