#include "segqa/attack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace segqa {

namespace fs = std::filesystem;

namespace {

template <typename T, typename G>
std::vector<T> grid_values(const G& g) {
  std::vector<T> out(g.v.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<T>(g.v[i]);
  return out;
}

template <typename TGrid, typename T>
TGrid fgsm_impl(const TGrid& grad, const TGrid& clean, T epsilon, T lo, T hi) {
  if (grad.rows != clean.rows || grad.cols != clean.cols) {
    throw DimensionError("fgsm_perturb: gradient and clean shapes differ");
  }
  if (!(epsilon >= T(0)) || !std::isfinite(static_cast<double>(epsilon))) {
    throw ValidationError("fgsm_perturb: epsilon must be finite and >= 0");
  }
  if (!(lo <= hi)) throw ValidationError("fgsm_perturb: clip_low > clip_high");
  TGrid out(clean.rows, clean.cols);
  for (size_t i = 0; i < clean.v.size(); ++i) {
    const auto g = grad.v[i];
    if (std::isnan(static_cast<double>(g))) throw AttackError("fgsm_perturb: NaN gradient");
    const T s = g > 0 ? T(1) : (g < 0 ? T(-1) : T(0));
    out.v[i] = std::clamp(static_cast<T>(clean.v[i] + epsilon * s), lo, hi);
  }
  return out;
}

}  // namespace

std::string to_string(AttackSurface s) {
  return s == AttackSurface::input_image ? "input_image" : "difference_image";
}

AttackSurface surface_from_string(const std::string& s) {
  if (s == "input_image") return AttackSurface::input_image;
  if (s == "difference_image") return AttackSurface::difference_image;
  throw ValidationError("unknown attack surface '" + s +
                        "' (expected input_image|difference_image)");
}

void AttackConfig::validate() const {
  if (epsilons.empty()) throw ValidationError("AttackConfig: epsilons must be nonempty");
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0f) || !std::isfinite(epsilons[i])) {
      throw ValidationError("AttackConfig: epsilons must be finite and >= 0");
    }
    if (i > 0 && epsilons[i] < epsilons[i - 1]) {
      throw ValidationError("AttackConfig: epsilons must be sorted ascending");
    }
  }
}

RegMode QualityPipeline::mode() const {
  if (!regnet) throw ValidationError("QualityPipeline: regnet is required");
  return regnet->regnet_arch().mode;
}

void QualityPipeline::validate(AttackSurface surface) const {
  const RegMode m = mode();
  if (m == RegMode::proposed && !recnet) {
    throw ValidationError("QualityPipeline: proposed mode requires a REC-Net");
  }
  if (m == RegMode::baseline && surface == AttackSurface::difference_image) {
    throw ValidationError(
        "attack surface difference_image requires the proposed mode (the baseline has no "
        "difference image)");
  }
}

Grid fgsm_perturb(const Grid& grad, const Grid& clean, float epsilon, float lo, float hi) {
  return fgsm_impl(grad, clean, epsilon, lo, hi);
}

Grid64 fgsm_perturb(const Grid64& grad, const Grid64& clean, double epsilon, double lo, double hi) {
  return fgsm_impl(grad, clean, epsilon, lo, hi);
}

template <typename T>
void build_attack_graph(AttackGraph<T>& out, const QualityPipeline& pipeline, const Image& image,
                        const SegMask& seg, float gt_dice, AttackSurface surface,
                        const nn::Tensor<T>* surface_override) {
  pipeline.validate(surface);
  const int n = image.rows();
  auto& g = out.graph;

  nn::Tensor<T> seg_t({1, 1, n, n});
  for (size_t i = 0; i < seg.labels().size(); ++i) seg_t.data[i] = static_cast<T>(seg.labels()[i]);
  const auto seg_node = g.constant(std::move(seg_t));

  typename nn::Graph<T>::Id two_channel = -1;
  if (surface == AttackSurface::input_image) {
    nn::Tensor<T> x({1, 1, n, n});
    if (surface_override) {
      x = *surface_override;
    } else {
      x.data = grid_values<T>(image.pixels());
    }
    out.surface = g.leaf(std::move(x));
    if (pipeline.mode() == RegMode::proposed) {
      nn::Tensor<T> inv({1, 1, n, n});
      for (size_t i = 0; i < seg.labels().size(); ++i) {
        inv.data[i] = seg.labels()[i] ? T(0) : T(1);
      }
      const auto masked = g.mul(out.surface, g.constant(std::move(inv)));
      const auto rec = recnet_forward(g, *pipeline.recnet, masked);
      const auto dif = g.sub(out.surface, rec);
      two_channel = g.concat_channels(dif, seg_node);
    } else {
      two_channel = g.concat_channels(out.surface, seg_node);
    }
  } else {
    // Clean difference image from the standard pipeline; the leaf is I_dif.
    nn::Tensor<T> d({1, 1, n, n});
    if (surface_override) {
      d = *surface_override;
    } else {
      const Image masked = mask_image(image, seg);
      const Image rec = reconstruct(*pipeline.recnet, masked);
      const DifferenceImage dif = difference_image(image, rec);
      d.data = grid_values<T>(dif.pixels());
    }
    out.surface = g.leaf(std::move(d));
    two_channel = g.concat_channels(out.surface, seg_node);
  }

  out.prediction = regnet_forward(g, *pipeline.regnet, two_channel);
  nn::Tensor<T> target({1, 1});
  target.data[0] = static_cast<T>(gt_dice);
  out.loss = g.mse(out.prediction, g.constant(std::move(target)));
}

namespace {

struct SurfaceBounds {
  float lo, hi;
};

SurfaceBounds bounds_for(AttackSurface s) {
  return s == AttackSurface::input_image ? SurfaceBounds{0.0f, 1.0f} : SurfaceBounds{-1.0f, 1.0f};
}

Grid tensor_to_grid(const nn::Tensor<float>& t, int n) {
  Grid g(n, n);
  g.v = t.data;
  return g;
}

nn::Tensor<float> grid_to_tensor(const Grid& g) {
  nn::Tensor<float> t({1, 1, g.rows, g.cols});
  t.data = g.v;
  return t;
}

struct SampleAttack {
  float clean_pred;
  Grid clean_surface;
  Grid gradient;
};

SampleAttack prepare_sample(const QualityPipeline& pipeline, const QualitySample& sample,
                            AttackSurface surface, bool want_gradient) {
  AttackGraph<float> ag;
  build_attack_graph(ag, pipeline, sample.image, sample.seg_candidate, sample.gt_dice.value,
                     surface);
  const int n = sample.image.rows();
  SampleAttack out{ag.graph.value(ag.prediction).data[0],
                   tensor_to_grid(ag.graph.value(ag.surface), n), Grid()};
  if (want_gradient) {
    ag.graph.backward(ag.loss);
    out.gradient = tensor_to_grid(ag.graph.grad(ag.surface), n);
    for (float gv : out.gradient.v) {
      if (std::isnan(gv)) {
        throw AttackError("NaN loss gradient for sample '" + sample.source_id + "'");
      }
    }
  }
  return out;
}

float rerun_with_surface(const QualityPipeline& pipeline, const QualitySample& sample,
                         AttackSurface surface, const Grid& perturbed) {
  AttackGraph<float> ag;
  const nn::Tensor<float> override_t = grid_to_tensor(perturbed);
  build_attack_graph(ag, pipeline, sample.image, sample.seg_candidate, sample.gt_dice.value,
                     surface, &override_t);
  return ag.graph.value(ag.prediction).data[0];
}

}  // namespace

AttackOutcome attack_sample(const QualityPipeline& pipeline, const QualitySample& sample,
                            const AttackConfig& config, float epsilon) {
  config.validate();
  pipeline.validate(config.surface);
  if (std::find(config.epsilons.begin(), config.epsilons.end(), epsilon) ==
      config.epsilons.end()) {
    throw ValidationError("attack_sample: epsilon " + std::to_string(epsilon) +
                          " is not in config.epsilons");
  }
  const SurfaceBounds b = bounds_for(config.surface);
  SampleAttack prep = prepare_sample(pipeline, sample, config.surface, epsilon > 0.0f);
  Grid perturbed = epsilon > 0.0f
                       ? fgsm_perturb(prep.gradient, prep.clean_surface, epsilon, b.lo, b.hi)
                       : prep.clean_surface;
  const float attacked = epsilon > 0.0f
                             ? rerun_with_surface(pipeline, sample, config.surface, perturbed)
                             : prep.clean_pred;
  return AttackOutcome{QualityScore(prep.clean_pred), QualityScore(attacked), std::move(perturbed)};
}

std::vector<SweepRow> sweep(const QualityPipeline& pipeline, const ISampleStore& test,
                            const AttackConfig& config) {
  config.validate();
  pipeline.validate(config.surface);
  if (test.size() == 0) throw ValidationError("sweep: test split is empty");

  const bool any_nonzero =
      std::any_of(config.epsilons.begin(), config.epsilons.end(), [](float e) { return e > 0; });
  const SurfaceBounds b = bounds_for(config.surface);
  const RegMode mode = pipeline.mode();

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(test.size()) * config.epsilons.size());
  for (int i = 0; i < test.size(); ++i) {
    const QualitySample sample = test.sample(i);
    const std::string id = test.sample_id(i);
    try {
      // The FGSM gradient is taken at the clean input, so it is shared
      // across epsilons.
      SampleAttack prep = prepare_sample(pipeline, sample, config.surface, any_nonzero);
      for (float eps : config.epsilons) {
        float attacked = prep.clean_pred;
        if (eps > 0.0f) {
          const Grid perturbed = fgsm_perturb(prep.gradient, prep.clean_surface, eps, b.lo, b.hi);
          attacked = rerun_with_surface(pipeline, sample, config.surface, perturbed);
        }
        rows.push_back(SweepRow{id, eps, config.surface, mode, sample.gt_dice.value,
                                prep.clean_pred, attacked});
      }
    } catch (const AttackError&) {
      throw;
    } catch (const std::exception& e) {
      throw AttackError("attack failed for sample '" + id + "': " + e.what());
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write sweep csv " + path.string());
  f << "sample_id,epsilon,surface,mode,gt_dice,clean_pred,attacked_pred\n";
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%.9g,%s,%s,%.9g,%.9g,%.9g\n", r.sample_id.c_str(),
                  static_cast<double>(r.epsilon), to_string(r.surface).c_str(),
                  to_string(r.mode).c_str(), static_cast<double>(r.gt_dice),
                  static_cast<double>(r.clean_pred), static_cast<double>(r.attacked_pred));
    f << buf;
  }
  if (!f) throw IoError("write failed for sweep csv " + path.string());
}

std::vector<SweepRow> read_sweep_csv(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read sweep csv " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "sample_id,epsilon,surface,mode,gt_dice,clean_pred,attacked_pred") {
    throw IoError("sweep csv has unexpected header: " + path.string());
  }
  std::vector<SweepRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    SweepRow r;
    std::getline(ss, r.sample_id, ',');
    std::getline(ss, field, ',');
    r.epsilon = std::stof(field);
    std::getline(ss, field, ',');
    r.surface = surface_from_string(field);
    std::getline(ss, field, ',');
    r.mode = reg_mode_from_string(field);
    std::getline(ss, field, ',');
    r.gt_dice = std::stof(field);
    std::getline(ss, field, ',');
    r.clean_pred = std::stof(field);
    if (!std::getline(ss, field)) throw IoError("sweep csv row is truncated: " + line);
    r.attacked_pred = std::stof(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

template void build_attack_graph<float>(AttackGraph<float>&, const QualityPipeline&, const Image&,
                                        const SegMask&, float, AttackSurface,
                                        const nn::Tensor<float>*);
template void build_attack_graph<double>(AttackGraph<double>&, const QualityPipeline&,
                                         const Image&, const SegMask&, float, AttackSurface,
                                         const nn::Tensor<double>*);

}  // namespace segqa
