#pragma once

#include <string>

#include "segqa/core.hpp"
#include "segqa/models.hpp"

namespace segqa {

enum class DegradeKind { dilate, erode, translate, elastic_warp, dropout_holes, undertrained_model };

std::string to_string(DegradeKind k);
DegradeKind degrade_kind_from_string(const std::string& s);

struct DegradationSpec {
  DegradeKind kind = DegradeKind::dilate;
  float magnitude = 0.0f;  // px radius / px shift / px displacement / hole count
  uint64_t seed = 0;
};

/// Produces a candidate mask from a nonempty ground-truth mask. Magnitude 0
/// is the identity for the deterministic kinds. The undertrained_model kind
/// needs an image and a segmenter; use the second overload.
SegMask degrade_mask(const SegMask& gt, const DegradationSpec& spec);

/// Variant that can also run a (partially trained) segmenter on the image
/// and threshold its output at 0.5.
SegMask degrade_mask(const SegMask& gt, const DegradationSpec& spec, const Image& image,
                     const ModelState& segmenter);

}  // namespace segqa
