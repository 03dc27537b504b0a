#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "segqa/data/store.hpp"
#include "segqa/models.hpp"
#include "segqa/nn/graph.hpp"

namespace segqa {

enum class AttackSurface { input_image, difference_image };

std::string to_string(AttackSurface s);
AttackSurface surface_from_string(const std::string& s);

struct AttackConfig {
  std::vector<float> epsilons{0.0f, 0.05f, 0.1f, 0.2f, 0.3f};  // ascending, intensity units
  AttackSurface surface = AttackSurface::input_image;

  void validate() const;
};

/// The models under attack. recnet may be null for the baseline.
struct QualityPipeline {
  const ModelState* recnet = nullptr;
  const ModelState* regnet = nullptr;

  RegMode mode() const;
  void validate(AttackSurface surface) const;
};

/// Single FGSM step: clip(clean + epsilon * sign(loss_gradient), lo, hi),
/// with sign(0) = 0. Throws AttackError on NaN gradients.
Grid fgsm_perturb(const Grid& loss_gradient, const Grid& clean, float epsilon, float clip_low,
                  float clip_high);
Grid64 fgsm_perturb(const Grid64& loss_gradient, const Grid64& clean, double epsilon,
                    double clip_low, double clip_high);

/// Differentiable forward pass of a quality pipeline with the attack surface
/// as a gradient-tracking leaf. Templated so gradient-correctness tests can
/// run the same construction in double precision.
template <typename T>
struct AttackGraph {
  nn::Graph<T> graph;
  typename nn::Graph<T>::Id surface = -1;  // leaf being attacked
  typename nn::Graph<T>::Id prediction = -1;
  typename nn::Graph<T>::Id loss = -1;  // (P_dice - GT_dice)^2
};

/// surface_override, when non-null, replaces the clean surface values (used
/// to re-run the forward pass after perturbation). For the input_image
/// surface in proposed mode the graph re-masks and re-reconstructs from the
/// perturbed image; the segmentation channel is always a constant.
template <typename T>
void build_attack_graph(AttackGraph<T>& out, const QualityPipeline& pipeline, const Image& image,
                        const SegMask& seg, float gt_dice, AttackSurface surface,
                        const nn::Tensor<T>* surface_override = nullptr);

struct AttackOutcome {
  QualityScore clean_pred;
  QualityScore attacked_pred;
  Grid perturbed_surface;  // for bound checks and reporting
};

/// FGSM attack on one sample at one epsilon. The candidate segmentation is
/// never perturbed.
AttackOutcome attack_sample(const QualityPipeline& pipeline, const QualitySample& sample,
                            const AttackConfig& config, float epsilon);

struct SweepRow {
  std::string sample_id;
  float epsilon = 0.0f;
  AttackSurface surface = AttackSurface::input_image;
  RegMode mode = RegMode::proposed;
  float gt_dice = 0.0f;
  float clean_pred = 0.0f;
  float attacked_pred = 0.0f;
};

/// Attacks every sample of the store at every epsilon (gradient computed
/// once per sample; it does not depend on epsilon). Rows are ordered by
/// (sample, epsilon) and deterministic.
std::vector<SweepRow> sweep(const QualityPipeline& pipeline, const ISampleStore& test,
                            const AttackConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

extern template void build_attack_graph<float>(AttackGraph<float>&, const QualityPipeline&,
                                               const Image&, const SegMask&, float, AttackSurface,
                                               const nn::Tensor<float>*);
extern template void build_attack_graph<double>(AttackGraph<double>&, const QualityPipeline&,
                                                const Image&, const SegMask&, float, AttackSurface,
                                                const nn::Tensor<double>*);

}  // namespace segqa
