#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "segqa/errors.hpp"

namespace segqa {

/// Raw row-major 2D float grid, the unvalidated carrier type.
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<float> v;

  Grid() = default;
  Grid(int r, int c, float fill = 0.0f) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

  float& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
  float at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
  size_t size() const { return v.size(); }
  bool same_shape(const Grid& o) const { return rows == o.rows && cols == o.cols; }
};

/// Row-major 2D double grid; difference images live here so that the
/// subtraction identity original == reconstruction + difference is exact.
struct Grid64 {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Grid64() = default;
  Grid64(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

  double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
  size_t size() const { return v.size(); }
};

/// A normalized square intensity slice with values in [0,1].
class Image {
 public:
  Image() = default;

  /// Validates squareness, finiteness and the [0,1] range.
  explicit Image(Grid pixels, std::optional<float> spacing_mm = std::nullopt);

  const Grid& pixels() const { return px_; }
  Grid& mutable_pixels() { return px_; }
  int rows() const { return px_.rows; }
  int cols() const { return px_.cols; }
  float at(int i, int j) const { return px_.at(i, j); }
  std::optional<float> spacing_mm() const { return spacing_mm_; }

 private:
  Grid px_;
  std::optional<float> spacing_mm_;
};

/// Binary segmentation mask, 1 = target structure, 0 = background.
class SegMask {
 public:
  SegMask() = default;
  SegMask(int rows, int cols) : rows_(rows), cols_(cols), labels_(static_cast<size_t>(rows) * cols, 0) {}

  /// Validates that every label is 0 or 1.
  SegMask(int rows, int cols, std::vector<uint8_t> labels);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  uint8_t at(int i, int j) const { return labels_[static_cast<size_t>(i) * cols_ + j]; }
  void set(int i, int j, uint8_t v) { labels_[static_cast<size_t>(i) * cols_ + j] = v; }
  const std::vector<uint8_t>& labels() const { return labels_; }
  size_t size() const { return labels_.size(); }

  /// Number of pixels labeled 1.
  int64_t area() const;
  bool empty_mask() const { return area() == 0; }
  bool same_shape(const SegMask& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<uint8_t> labels_;
};

/// Input image minus its reconstruction; values in [-1,1].
class DifferenceImage {
 public:
  DifferenceImage() = default;
  explicit DifferenceImage(Grid64 pixels);

  const Grid64& pixels() const { return px_; }
  int rows() const { return px_.rows; }
  int cols() const { return px_.cols; }
  double at(int i, int j) const { return px_.at(i, j); }

 private:
  Grid64 px_;
};

/// A segmentation quality value in [0,1] (ground truth or predicted Dice).
struct QualityScore {
  float value = 0.0f;

  QualityScore() = default;
  explicit QualityScore(float v);
};

/// Zeroes out every pixel labeled as target: returns I * (1 - S).
Image mask_image(const Image& image, const SegMask& mask);

/// Elementwise original - reconstruction. The sum reconstruction + result
/// reproduces the original exactly (difference pixels are doubles).
DifferenceImage difference_image(const Image& original, const Image& reconstruction);

/// Dice overlap 2|A∩B| / (|A|+|B|). Both masks empty -> 1.0 by convention,
/// one empty -> 0.0.
QualityScore dice(const SegMask& a, const SegMask& b);

/// Min-max scales a raw grid to [0,1]; a constant grid maps to all zeros.
Image normalize(const Grid& raw);

}  // namespace segqa
