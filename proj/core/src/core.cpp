#include "segqa/core.hpp"

#include <cmath>
#include <string>

namespace segqa {

namespace {

std::string shape_str(int r, int c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

Image::Image(Grid pixels, std::optional<float> spacing_mm)
    : px_(std::move(pixels)), spacing_mm_(spacing_mm) {
  if (px_.rows != px_.cols || px_.rows < 1) {
    throw DimensionError("Image must be square and nonempty, got " + shape_str(px_.rows, px_.cols));
  }
  for (float p : px_.v) {
    if (!std::isfinite(p)) throw ValidationError("Image pixel is not finite");
    if (p < 0.0f || p > 1.0f) {
      throw ValidationError("Image pixel " + std::to_string(p) + " outside [0,1]");
    }
  }
}

SegMask::SegMask(int rows, int cols, std::vector<uint8_t> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
  if (labels_.size() != static_cast<size_t>(rows) * cols) {
    throw DimensionError("SegMask label buffer does not match " + shape_str(rows, cols));
  }
  for (uint8_t l : labels_) {
    if (l > 1) throw ValidationError("SegMask labels must be 0 or 1, got " + std::to_string(int(l)));
  }
}

int64_t SegMask::area() const {
  int64_t a = 0;
  for (uint8_t l : labels_) a += l;
  return a;
}

DifferenceImage::DifferenceImage(Grid64 pixels) : px_(std::move(pixels)) {
  for (double p : px_.v) {
    if (!std::isfinite(p)) throw ValidationError("DifferenceImage pixel is not finite");
  }
}

QualityScore::QualityScore(float v) : value(v) {
  if (!(v >= 0.0f && v <= 1.0f)) {
    throw ValidationError("QualityScore " + std::to_string(v) + " outside [0,1]");
  }
}

Image mask_image(const Image& image, const SegMask& mask) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols()) {
    throw DimensionError("mask_image: image " + shape_str(image.rows(), image.cols()) +
                         " vs mask " + shape_str(mask.rows(), mask.cols()));
  }
  Grid out = image.pixels();
  const auto& labels = mask.labels();
  for (size_t i = 0; i < out.v.size(); ++i) {
    if (labels[i]) out.v[i] = 0.0f;
  }
  return Image(std::move(out), image.spacing_mm());
}

DifferenceImage difference_image(const Image& original, const Image& reconstruction) {
  if (original.rows() != reconstruction.rows() || original.cols() != reconstruction.cols()) {
    throw DimensionError("difference_image: original " + shape_str(original.rows(), original.cols()) +
                         " vs reconstruction " + shape_str(reconstruction.rows(), reconstruction.cols()));
  }
  Grid64 out(original.rows(), original.cols());
  const auto& a = original.pixels().v;
  const auto& b = reconstruction.pixels().v;
  for (size_t i = 0; i < a.size(); ++i) {
    // double holds the difference of two floats exactly
    out.v[i] = static_cast<double>(a[i]) - static_cast<double>(b[i]);
  }
  return DifferenceImage(std::move(out));
}

QualityScore dice(const SegMask& a, const SegMask& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("dice: mask shapes " + shape_str(a.rows(), a.cols()) + " vs " +
                         shape_str(b.rows(), b.cols()));
  }
  int64_t inter = 0, total = 0;
  const auto& la = a.labels();
  const auto& lb = b.labels();
  for (size_t i = 0; i < la.size(); ++i) {
    inter += la[i] & lb[i];
    total += la[i] + lb[i];
  }
  if (total == 0) return QualityScore(1.0f);  // both empty
  return QualityScore(static_cast<float>(2.0 * static_cast<double>(inter) / static_cast<double>(total)));
}

Image normalize(const Grid& raw) {
  if (raw.rows < 1 || raw.rows != raw.cols) {
    throw DimensionError("normalize: grid must be square and nonempty, got " +
                         shape_str(raw.rows, raw.cols));
  }
  float lo = raw.v[0], hi = raw.v[0];
  for (float p : raw.v) {
    if (!std::isfinite(p)) throw ValidationError("normalize: input contains NaN or Inf");
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  Grid out(raw.rows, raw.cols);
  if (lo == hi) {
    return Image(std::move(out));  // constant slice -> all zeros
  }
  const double span = static_cast<double>(hi) - static_cast<double>(lo);
  for (size_t i = 0; i < raw.v.size(); ++i) {
    out.v[i] = static_cast<float>((static_cast<double>(raw.v[i]) - static_cast<double>(lo)) / span);
  }
  return Image(std::move(out));
}

}  // namespace segqa
