#include "segqa/data/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "segqa/rng.hpp"

namespace segqa {

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> out;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) out.emplace_back(dy, dx);
  return out;
}

SegMask dilate(const SegMask& m, int radius) {
  if (radius <= 0) return m;
  const auto offs = disk_offsets(radius);
  SegMask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j)) continue;
      for (auto [dy, dx] : offs) {
        const int y = i + dy, x = j + dx;
        if (y >= 0 && y < m.rows() && x >= 0 && x < m.cols()) out.set(y, x, 1);
      }
    }
  }
  return out;
}

SegMask erode(const SegMask& m, int radius) {
  if (radius <= 0) return m;
  const auto offs = disk_offsets(radius);
  SegMask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j)) continue;
      bool keep = true;
      for (auto [dy, dx] : offs) {
        const int y = i + dy, x = j + dx;
        if (y < 0 || y >= m.rows() || x < 0 || x >= m.cols() || !m.at(y, x)) {
          keep = false;
          break;
        }
      }
      if (keep) out.set(i, j, 1);
    }
  }
  return out;
}

SegMask translate(const SegMask& m, float magnitude, uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x7245ULL));
  std::uniform_real_distribution<double> uni(0.0, 2.0 * 3.141592653589793);
  const double theta = uni(rng);
  const int dx = static_cast<int>(std::lround(magnitude * std::cos(theta)));
  const int dy = static_cast<int>(std::lround(magnitude * std::sin(theta)));
  if (dx == 0 && dy == 0) return m;
  SegMask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j)) continue;
      const int y = i + dy, x = j + dx;
      if (y >= 0 && y < m.rows() && x >= 0 && x < m.cols()) out.set(y, x, 1);
    }
  }
  return out;
}

// Coarse random displacement field, bilinearly upsampled, nearest resample.
SegMask elastic_warp(const SegMask& m, float magnitude, uint64_t seed) {
  if (magnitude <= 0.0f) return m;
  std::mt19937_64 rng(derive_seed(seed, 0xE1A5ULL));
  std::uniform_real_distribution<float> uni(-1.0f, 1.0f);
  constexpr int kCells = 4;
  const int g = kCells + 1;
  std::vector<float> fx(static_cast<size_t>(g) * g), fy(fx.size());
  float max_abs = 0.0f;
  for (size_t k = 0; k < fx.size(); ++k) {
    fx[k] = uni(rng);
    fy[k] = uni(rng);
    max_abs = std::max({max_abs, std::abs(fx[k]), std::abs(fy[k])});
  }
  if (max_abs == 0.0f) return m;
  const float gain = magnitude / max_abs;

  const int rows = m.rows(), cols = m.cols();
  SegMask out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const float gy = static_cast<float>(i) * kCells / rows;
    const int y0 = std::min(static_cast<int>(gy), kCells - 1);
    const float ty = gy - y0;
    for (int j = 0; j < cols; ++j) {
      const float gx = static_cast<float>(j) * kCells / cols;
      const int x0 = std::min(static_cast<int>(gx), kCells - 1);
      const float tx = gx - x0;
      auto lerp = [&](const std::vector<float>& f) {
        const float v00 = f[static_cast<size_t>(y0) * g + x0];
        const float v01 = f[static_cast<size_t>(y0) * g + x0 + 1];
        const float v10 = f[static_cast<size_t>(y0 + 1) * g + x0];
        const float v11 = f[static_cast<size_t>(y0 + 1) * g + x0 + 1];
        return (v00 * (1 - tx) + v01 * tx) * (1 - ty) + (v10 * (1 - tx) + v11 * tx) * ty;
      };
      const int sy = i + static_cast<int>(std::lround(gain * lerp(fy)));
      const int sx = j + static_cast<int>(std::lround(gain * lerp(fx)));
      if (sy >= 0 && sy < rows && sx >= 0 && sx < cols && m.at(sy, sx)) out.set(i, j, 1);
    }
  }
  return out;
}

SegMask dropout_holes(const SegMask& m, int holes, uint64_t seed) {
  if (holes <= 0) return m;
  std::mt19937_64 rng(derive_seed(seed, 0xD07ULL));
  SegMask out = m;
  const int max_r = std::max(2, m.rows() / 10);
  for (int h = 0; h < holes; ++h) {
    std::vector<int64_t> on;
    for (int64_t k = 0; k < static_cast<int64_t>(out.size()); ++k)
      if (out.labels()[static_cast<size_t>(k)]) on.push_back(k);
    if (on.empty()) break;
    const int64_t pick = on[rng() % on.size()];
    const int ci = static_cast<int>(pick / m.cols());
    const int cj = static_cast<int>(pick % m.cols());
    const int r = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_r - 1));
    for (auto [dy, dx] : disk_offsets(r)) {
      const int y = ci + dy, x = cj + dx;
      if (y >= 0 && y < m.rows() && x >= 0 && x < m.cols()) out.set(y, x, 0);
    }
  }
  return out;
}

}  // namespace

std::string to_string(DegradeKind k) {
  switch (k) {
    case DegradeKind::dilate: return "dilate";
    case DegradeKind::erode: return "erode";
    case DegradeKind::translate: return "translate";
    case DegradeKind::elastic_warp: return "elastic_warp";
    case DegradeKind::dropout_holes: return "dropout_holes";
    case DegradeKind::undertrained_model: return "undertrained_model";
  }
  throw ValidationError("invalid degrade kind value");
}

DegradeKind degrade_kind_from_string(const std::string& s) {
  if (s == "dilate") return DegradeKind::dilate;
  if (s == "erode") return DegradeKind::erode;
  if (s == "translate") return DegradeKind::translate;
  if (s == "elastic_warp") return DegradeKind::elastic_warp;
  if (s == "dropout_holes") return DegradeKind::dropout_holes;
  if (s == "undertrained_model") return DegradeKind::undertrained_model;
  throw ValidationError("unknown degradation kind '" + s + "'");
}

SegMask degrade_mask(const SegMask& gt, const DegradationSpec& spec) {
  if (gt.empty_mask()) throw ValidationError("degrade_mask: ground-truth mask is empty");
  if (spec.magnitude < 0.0f || !std::isfinite(spec.magnitude)) {
    throw ValidationError("degrade_mask: magnitude must be finite and >= 0");
  }
  switch (spec.kind) {
    case DegradeKind::dilate:
      return dilate(gt, static_cast<int>(std::lround(spec.magnitude)));
    case DegradeKind::erode:
      return erode(gt, static_cast<int>(std::lround(spec.magnitude)));
    case DegradeKind::translate:
      return translate(gt, spec.magnitude, spec.seed);
    case DegradeKind::elastic_warp:
      return elastic_warp(gt, spec.magnitude, spec.seed);
    case DegradeKind::dropout_holes:
      return dropout_holes(gt, static_cast<int>(std::lround(spec.magnitude)), spec.seed);
    case DegradeKind::undertrained_model:
      throw ValidationError(
          "degrade_mask: undertrained_model needs an image and a segmenter; call the overload "
          "taking (gt, spec, image, segmenter)");
  }
  throw ValidationError("degrade_mask: unknown degradation kind");
}

SegMask degrade_mask(const SegMask& gt, const DegradationSpec& spec, const Image& image,
                     const ModelState& segmenter) {
  if (spec.kind != DegradeKind::undertrained_model) return degrade_mask(gt, spec);
  if (gt.empty_mask()) throw ValidationError("degrade_mask: ground-truth mask is empty");
  if (image.rows() != gt.rows() || image.cols() != gt.cols()) {
    throw DimensionError("degrade_mask: image and mask shapes differ");
  }
  const Image prob = reconstruct(segmenter, image);  // 1-channel sigmoid map
  SegMask out(gt.rows(), gt.cols());
  for (int i = 0; i < gt.rows(); ++i)
    for (int j = 0; j < gt.cols(); ++j)
      if (prob.at(i, j) > 0.5f) out.set(i, j, 1);
  return out;
}

}  // namespace segqa
