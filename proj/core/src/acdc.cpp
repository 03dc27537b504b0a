#include "segqa/data/acdc.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "segqa/core.hpp"
#include "segqa/data/nifti.hpp"
#include "segqa/data/store.hpp"
#include "segqa/rng.hpp"

namespace segqa {

namespace fs = std::filesystem;

namespace {

// Copies the centered n x n window; out-of-volume pixels are zero.
template <typename Get>
void crop_center(int src_h, int src_w, int n, const Get& get, Grid* img_out, SegMask* mask_out,
                 const NiftiVolume& labels, int z, int lvm_label) {
  const int off_i = (src_h - n) / 2;
  const int off_j = (src_w - n) / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int si = i + off_i;
      const int sj = j + off_j;
      if (si < 0 || si >= src_h || sj < 0 || sj >= src_w) continue;
      img_out->at(i, j) = get(si, sj);
      const int lab = static_cast<int>(std::lround(labels.at(sj, si, z)));
      if (lab == lvm_label) mask_out->set(i, j, 1);
    }
  }
}

bool is_gt_file(const fs::path& p) {
  const std::string name = p.filename().string();
  if (name.find("_frame") == std::string::npos) return false;
  return name.ends_with("_gt.nii.gz") || name.ends_with("_gt.nii");
}

fs::path image_file_for(const fs::path& gt) {
  std::string name = gt.filename().string();
  const auto pos = name.find("_gt.nii");
  name = name.substr(0, pos) + name.substr(pos + 3);
  return gt.parent_path() / name;
}

}  // namespace

DatasetManifest ingest_acdc(const fs::path& root, const AcdcConfig& cfg, const fs::path& out_dir,
                            std::vector<std::string>* warnings) {
  if (cfg.image_size < 8) throw ValidationError("ingest_acdc: image_size must be >= 8");
  if (!fs::is_directory(root)) throw IngestError("ACDC root is not a directory: " + root.string());

  // ACDC distributes patients either directly under root or under
  // root/training and root/testing.
  std::vector<fs::path> patient_dirs;
  auto scan = [&](const fs::path& dir) {
    if (!fs::is_directory(dir)) return;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_directory() && e.path().filename().string().starts_with("patient")) {
        patient_dirs.push_back(e.path());
      }
    }
  };
  scan(root);
  scan(root / "training");
  scan(root / "testing");
  std::sort(patient_dirs.begin(), patient_dirs.end());
  if (patient_dirs.empty()) {
    throw IngestError("no patient directories found under " + root.string());
  }

  struct PatientSamples {
    std::string id;
    std::vector<size_t> record_indices;
  };
  std::vector<PatientSamples> retained;
  DatasetManifest manifest;
  manifest.seed = cfg.split_seed;
  {
    nlohmann::json gc;
    gc["kind"] = "acdc";
    gc["root"] = root.string();
    gc["lvm_label"] = cfg.lvm_label;
    gc["image_size"] = cfg.image_size;
    manifest.generator_config = gc.dump();
  }

  for (const fs::path& pdir : patient_dirs) {
    const std::string patient = pdir.filename().string();
    std::vector<fs::path> gt_files;
    for (const auto& e : fs::directory_iterator(pdir)) {
      if (e.is_regular_file() && is_gt_file(e.path())) gt_files.push_back(e.path());
    }
    std::sort(gt_files.begin(), gt_files.end());

    PatientSamples ps{patient, {}};
    for (const fs::path& gt_path : gt_files) {
      const fs::path img_path = image_file_for(gt_path);
      if (!fs::exists(img_path)) {
        throw IngestError("missing image volume " + img_path.string() + " for label volume " +
                          gt_path.string());
      }
      NiftiVolume labels, image;
      try {
        labels = read_nifti(gt_path);
      } catch (const IngestError&) {
        throw;
      } catch (const std::exception& e) {
        throw IngestError("corrupt label volume " + gt_path.string() + ": " + e.what());
      }
      try {
        image = read_nifti(img_path);
      } catch (const IngestError&) {
        throw;
      } catch (const std::exception& e) {
        throw IngestError("corrupt image volume " + img_path.string() + ": " + e.what());
      }
      if (labels.nx != image.nx || labels.ny != image.ny || labels.nz != image.nz) {
        throw IngestError("image/label dimensions differ for " + img_path.string());
      }

      const std::string frame_tag = [&] {
        const std::string name = gt_path.filename().string();
        const auto fpos = name.find("_frame");
        return name.substr(fpos + 1, 7);  // frameXX
      }();

      for (int z = 0; z < labels.nz; ++z) {
        Grid img_slice(cfg.image_size, cfg.image_size);
        SegMask mask(cfg.image_size, cfg.image_size);
        crop_center(
            image.ny, image.nx, cfg.image_size,
            [&](int si, int sj) { return image.at(sj, si, z); }, &img_slice, &mask, labels, z,
            cfg.lvm_label);
        if (mask.empty_mask()) continue;  // slices without LVM are excluded

        Image normalized;
        try {
          normalized = normalize(img_slice);
        } catch (const ValidationError& e) {
          throw IngestError("invalid intensities in " + img_path.string() + " slice " +
                            std::to_string(z) + ": " + e.what());
        }
        char slice_id[128];
        std::snprintf(slice_id, sizeof(slice_id), "%s_%s_s%02d", patient.c_str(), frame_tag.c_str(),
                      z);
        const std::string rel = std::string("samples/") + slice_id;
        write_sample(out_dir / rel, normalized, mask, mask);
        ps.record_indices.push_back(manifest.records.size());
        manifest.records.push_back(
            ManifestRecord{rel, patient, Split::train, dice(mask, mask).value});
      }
    }
    if (ps.record_indices.empty()) {
      if (warnings) {
        warnings->push_back("patient " + patient + " has no slices with LVM label " +
                            std::to_string(cfg.lvm_label) + "; skipped");
      }
      continue;
    }
    retained.push_back(std::move(ps));
  }

  // Patient-level split: no patient contributes to two splits.
  std::vector<int> order(retained.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(cfg.split_seed, 0xACDCULL));
  std::shuffle(order.begin(), order.end(), rng);
  const int n_train = static_cast<int>(std::lround(cfg.train_frac * retained.size()));
  const int n_val = static_cast<int>(std::lround(cfg.val_frac * retained.size()));
  for (size_t k = 0; k < order.size(); ++k) {
    Split s = Split::test;
    if (static_cast<int>(k) < n_train) {
      s = Split::train;
    } else if (static_cast<int>(k) < n_train + n_val) {
      s = Split::val;
    }
    for (size_t idx : retained[static_cast<size_t>(order[k])].record_indices) {
      manifest.records[idx].split = s;
    }
  }

  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace segqa
