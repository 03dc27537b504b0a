#include "segqa/data/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "segqa/core.hpp"
#include "segqa/data/store.hpp"
#include "segqa/rng.hpp"

namespace segqa {

namespace fs = std::filesystem;

namespace {

// Bilinearly upsampled random lattice; smooth texture in [0,1].
Grid value_noise(int n, int cells, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);
  const int g = cells + 1;
  std::vector<float> lattice(static_cast<size_t>(g) * g);
  for (auto& v : lattice) v = uni(rng);
  Grid out(n, n);
  const float scale = static_cast<float>(cells) / static_cast<float>(n);
  for (int i = 0; i < n; ++i) {
    const float fy = i * scale;
    const int y0 = std::min(static_cast<int>(fy), cells - 1);
    const float ty = fy - y0;
    for (int j = 0; j < n; ++j) {
      const float fx = j * scale;
      const int x0 = std::min(static_cast<int>(fx), cells - 1);
      const float tx = fx - x0;
      const float v00 = lattice[static_cast<size_t>(y0) * g + x0];
      const float v01 = lattice[static_cast<size_t>(y0) * g + x0 + 1];
      const float v10 = lattice[static_cast<size_t>(y0 + 1) * g + x0];
      const float v11 = lattice[static_cast<size_t>(y0 + 1) * g + x0 + 1];
      out.at(i, j) = (v00 * (1 - tx) + v01 * tx) * (1 - ty) + (v10 * (1 - tx) + v11 * tx) * ty;
    }
  }
  return out;
}

struct Annulus {
  float cx, cy;          // center
  float a_out, b_out;    // outer semi-axes
  float inner_scale;     // inner semi-axes = scale * outer
  float theta;           // rotation

  bool inside(float x, float y, float scale) const {
    const float dx = x - cx;
    const float dy = y - cy;
    const float u = dx * std::cos(theta) + dy * std::sin(theta);
    const float v = -dx * std::sin(theta) + dy * std::cos(theta);
    const float ra = scale * a_out;
    const float rb = scale * b_out;
    return (u * u) / (ra * ra) + (v * v) / (rb * rb) <= 1.0f;
  }

  bool in_ring(float x, float y) const { return inside(x, y, 1.0f) && !inside(x, y, inner_scale); }
};

struct GeneratedSample {
  Image image;
  SegMask mask;
};

GeneratedSample make_sample(int n, uint64_t sample_seed) {
  std::mt19937_64 rng(sample_seed);
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);

  const int64_t total = static_cast<int64_t>(n) * n;
  const int64_t min_area = total * 2 / 100;
  const int64_t max_area = total * 40 / 100;

  // Ring geometry; the parameter ranges keep the area within bounds, the
  // rejection loop guards the tails.
  Annulus ring{};
  SegMask mask(n, n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    ring.cx = n * (0.5f + 0.12f * (uni(rng) - 0.5f) * 2.0f);
    ring.cy = n * (0.5f + 0.12f * (uni(rng) - 0.5f) * 2.0f);
    ring.a_out = n * (0.16f + 0.14f * uni(rng));
    ring.b_out = n * (0.16f + 0.14f * uni(rng));
    ring.inner_scale = 0.45f + 0.3f * uni(rng);
    ring.theta = 3.14159265f * uni(rng);

    mask = SegMask(n, n);
    int64_t area = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (ring.in_ring(static_cast<float>(j) + 0.5f, static_cast<float>(i) + 0.5f)) {
          mask.set(i, j, 1);
          ++area;
        }
      }
    }
    if (area >= min_area && area <= max_area) break;
    if (attempt == 99) throw ValidationError("synthetic generator: ring area out of bounds");
  }

  // Scene: smooth background texture, a brighter textured ring, and a mild
  // illumination ramp; min-max normalized at the end.
  Grid coarse = value_noise(n, 6, rng);
  Grid fine = value_noise(n, 16, rng);
  Grid ring_tex = value_noise(n, 10, rng);
  const float ramp_theta = 2.0f * 3.14159265f * uni(rng);
  const float ramp_amp = 0.1f * uni(rng);
  const float ring_gain = 0.45f + 0.15f * uni(rng);

  Grid raw(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const float ramp =
          ramp_amp * ((j * std::cos(ramp_theta) + i * std::sin(ramp_theta)) / static_cast<float>(n));
      float v = 0.25f + 0.3f * coarse.at(i, j) + 0.12f * fine.at(i, j) + ramp;
      if (mask.at(i, j)) v += ring_gain * (0.7f + 0.3f * ring_tex.at(i, j));
      raw.at(i, j) = v;
    }
  }
  return GeneratedSample{normalize(raw), std::move(mask)};
}

}  // namespace

DatasetManifest generate_synthetic_dataset(const SyntheticConfig& cfg, const fs::path& out_dir) {
  if (cfg.count < 1) throw ValidationError("generate_synthetic_dataset: count must be >= 1");
  if (cfg.image_size < 32) throw ValidationError("generate_synthetic_dataset: image_size must be >= 32");
  if (cfg.train_frac <= 0 || cfg.val_frac < 0 || cfg.train_frac + cfg.val_frac > 1.0) {
    throw ValidationError("generate_synthetic_dataset: invalid split fractions");
  }

  // Split assignment by shuffled sample index; each sample is its own source.
  std::vector<int> order(static_cast<size_t>(cfg.count));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 split_rng(derive_seed(cfg.seed, 0x5EED5EEDULL));
  std::shuffle(order.begin(), order.end(), split_rng);
  const int n_train = static_cast<int>(std::lround(cfg.train_frac * cfg.count));
  const int n_val = static_cast<int>(std::lround(cfg.val_frac * cfg.count));
  std::vector<Split> split_of(static_cast<size_t>(cfg.count), Split::test);
  for (int k = 0; k < cfg.count; ++k) {
    if (k < n_train) {
      split_of[static_cast<size_t>(order[k])] = Split::train;
    } else if (k < n_train + n_val) {
      split_of[static_cast<size_t>(order[k])] = Split::val;
    }
  }

  DatasetManifest manifest;
  manifest.seed = cfg.seed;
  nlohmann::json gc;
  gc["kind"] = "synthetic";
  gc["count"] = cfg.count;
  gc["image_size"] = cfg.image_size;
  gc["train_frac"] = cfg.train_frac;
  gc["val_frac"] = cfg.val_frac;
  manifest.generator_config = gc.dump();

  for (int i = 0; i < cfg.count; ++i) {
    GeneratedSample s = make_sample(cfg.image_size, derive_seed(cfg.seed, static_cast<uint64_t>(i)));
    char id[32];
    std::snprintf(id, sizeof(id), "shape_%05d", i);
    char rel[64];
    std::snprintf(rel, sizeof(rel), "samples/%06d", i);
    // candidate starts equal to ground truth; the corpus stage replaces it
    write_sample(out_dir / rel, s.image, s.mask, s.mask);
    manifest.records.push_back(
        ManifestRecord{rel, id, split_of[static_cast<size_t>(i)], dice(s.mask, s.mask).value});
  }
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

DatasetManifest generate_synthetic_dataset(int count, int image_size, uint64_t seed,
                                           const fs::path& out_dir) {
  SyntheticConfig cfg;
  cfg.count = count;
  cfg.image_size = image_size;
  cfg.seed = seed;
  return generate_synthetic_dataset(cfg, out_dir);
}

}  // namespace segqa
