#include "segqa/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace segqa {

namespace {

constexpr int kMaxWidthShift = 4;  // regnet widths stop doubling after 16x base

int reg_width(const RegNetArch& a, int block) {
  return a.base_width << std::min(block, kMaxWidthShift);
}

struct ParamInit {
  std::vector<ParamTensor>* out;
  std::mt19937_64 rng;

  // He-normal for layers feeding ReLU, Xavier-ish for the sigmoid head.
  void conv(const std::string& name, int co, int ci, int k, bool relu_next) {
    const int fan_in = ci * k * k;
    const float stddev = relu_next ? std::sqrt(2.0f / fan_in) : std::sqrt(1.0f / fan_in);
    std::normal_distribution<float> dist(0.0f, stddev);
    ParamTensor w{name + ".w", {co, ci, k, k}, {}};
    w.data.resize(static_cast<size_t>(co) * ci * k * k);
    for (auto& v : w.data) v = dist(rng);
    out->push_back(std::move(w));
    out->push_back(ParamTensor{name + ".b", {co}, std::vector<float>(co, 0.0f)});
  }

  void fc(const std::string& name, int o, int f, bool relu_next) {
    const float stddev = relu_next ? std::sqrt(2.0f / f) : std::sqrt(1.0f / f);
    std::normal_distribution<float> dist(0.0f, stddev);
    ParamTensor w{name + ".w", {o, f}, {}};
    w.data.resize(static_cast<size_t>(o) * f);
    for (auto& v : w.data) v = dist(rng);
    out->push_back(std::move(w));
    out->push_back(ParamTensor{name + ".b", {o}, std::vector<float>(o, 0.0f)});
  }
};

template <typename T>
typename nn::Graph<T>::Id param_node(nn::Graph<T>& g, const ParamTensor& p, bool trainable,
                                     std::vector<typename nn::Graph<T>::Id>* ids) {
  nn::Tensor<T> t(p.shape);
  for (size_t i = 0; i < p.data.size(); ++i) t.data[i] = static_cast<T>(p.data[i]);
  auto id = trainable ? g.leaf(std::move(t)) : g.constant(std::move(t));
  if (ids) ids->push_back(id);
  return id;
}

}  // namespace

std::string to_string(RegMode mode) {
  return mode == RegMode::proposed ? "proposed" : "baseline";
}

RegMode reg_mode_from_string(const std::string& s) {
  if (s == "proposed") return RegMode::proposed;
  if (s == "baseline") return RegMode::baseline;
  throw ValidationError("unknown regressor mode '" + s + "' (expected proposed|baseline)");
}

const RecNetArch& ModelState::recnet_arch() const {
  if (!is_recnet()) throw ValidationError("model is not a REC-Net");
  return std::get<RecNetArch>(architecture);
}

const RegNetArch& ModelState::regnet_arch() const {
  if (!is_regnet()) throw ValidationError("model is not a REG-Net");
  return std::get<RegNetArch>(architecture);
}

const ParamTensor& ModelState::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw ValidationError("missing parameter '" + name + "'");
}

ParamTensor& ModelState::param(const std::string& name) {
  for (auto& p : params)
    if (p.name == name) return p;
  throw ValidationError("missing parameter '" + name + "'");
}

int64_t ModelState::param_count() const {
  int64_t n = 0;
  for (const auto& p : params) n += static_cast<int64_t>(p.data.size());
  return n;
}

ModelState build_recnet(int depth, int base_width, uint64_t seed, int in_channels) {
  if (depth < 2 || depth > 5) throw ValidationError("recnet depth must be in [2,5]");
  if (base_width < 4) throw ValidationError("recnet base_width must be >= 4");
  if (in_channels < 1) throw ValidationError("recnet in_channels must be >= 1");

  ModelState m;
  m.architecture = RecNetArch{depth, base_width, in_channels};
  m.meta.seed = seed;
  ParamInit init{&m.params, std::mt19937_64(seed)};

  int cin = in_channels;
  for (int i = 0; i < depth; ++i) {
    const int w = base_width << i;
    init.conv("enc" + std::to_string(i) + ".conv1", w, cin, 3, true);
    init.conv("enc" + std::to_string(i) + ".conv2", w, w, 3, true);
    cin = w;
  }
  const int wb = base_width << depth;
  init.conv("bott.conv1", wb, cin, 3, true);
  init.conv("bott.conv2", wb, wb, 3, true);
  for (int i = depth - 1; i >= 0; --i) {
    const int w = base_width << i;
    init.conv("dec" + std::to_string(i) + ".up", w, w * 2, 3, true);
    init.conv("dec" + std::to_string(i) + ".conv1", w, w * 2, 3, true);
    init.conv("dec" + std::to_string(i) + ".conv2", w, w, 3, true);
  }
  init.conv("out", 1, base_width, 1, false);
  return m;
}

ModelState build_regnet(RegMode mode, uint64_t seed, const RegNetOptions& options) {
  if (options.blocks < 1 || options.blocks > 8) throw ValidationError("regnet blocks must be in [1,8]");
  if (options.base_width < 4) throw ValidationError("regnet base_width must be >= 4");
  if (options.fc1 < 1 || options.fc2 < 1) throw ValidationError("regnet fc widths must be >= 1");

  RegNetArch arch;
  arch.mode = mode;
  arch.blocks = options.blocks;
  arch.base_width = options.base_width;
  arch.fc1 = options.fc1;
  arch.fc2 = options.fc2;
  arch.in_channels = 2;

  ModelState m;
  m.architecture = arch;
  m.meta.seed = seed;
  ParamInit init{&m.params, std::mt19937_64(seed)};

  int cin = arch.in_channels;
  for (int i = 0; i < arch.blocks; ++i) {
    const int w = reg_width(arch, i);
    init.conv("conv" + std::to_string(i), w, cin, 3, true);
    cin = w;
  }
  init.fc("fc1", arch.fc1, cin, true);
  init.fc("fc2", arch.fc2, arch.fc1, true);
  init.fc("out", 1, arch.fc2, false);
  return m;
}

template <typename T>
typename nn::Graph<T>::Id recnet_forward(nn::Graph<T>& g, const ModelState& model,
                                         typename nn::Graph<T>::Id input, bool trainable,
                                         std::vector<typename nn::Graph<T>::Id>* param_ids) {
  const RecNetArch& arch = model.recnet_arch();
  const auto& in_shape = g.value(input).shape;
  if (in_shape.size() != 4 || in_shape[1] != arch.in_channels) {
    throw DimensionError("recnet_forward: input must be (N," + std::to_string(arch.in_channels) +
                         ",n,n)");
  }
  const int n = in_shape[2];
  if (in_shape[3] != n) throw DimensionError("recnet_forward: input must be square");
  if (n % (1 << arch.depth) != 0 || n < (1 << arch.depth)) {
    throw ValidationError("recnet_forward: image size " + std::to_string(n) +
                          " incompatible with depth " + std::to_string(arch.depth) +
                          " (size must be a positive multiple of " + std::to_string(1 << arch.depth) +
                          ")");
  }

  // Parameter nodes are created in ModelState order so param_ids lines up.
  size_t next = 0;
  auto take = [&](const std::string& name) {
    const ParamTensor& p = model.params.at(next);
    if (p.name != name) throw ValidationError("recnet_forward: parameter order mismatch at " + name);
    ++next;
    return param_node(g, p, trainable, param_ids);
  };

  const nn::ConvSpec same{1, 1};
  auto cur = input;
  std::vector<typename nn::Graph<T>::Id> skips;
  for (int i = 0; i < arch.depth; ++i) {
    const std::string e = "enc" + std::to_string(i);
    auto w1 = take(e + ".conv1.w"), b1 = take(e + ".conv1.b");
    cur = g.relu(g.conv2d(cur, w1, b1, same));
    auto w2 = take(e + ".conv2.w"), b2 = take(e + ".conv2.b");
    cur = g.relu(g.conv2d(cur, w2, b2, same));
    skips.push_back(cur);
    cur = g.maxpool2(cur);
  }
  {
    auto w1 = take("bott.conv1.w"), b1 = take("bott.conv1.b");
    cur = g.relu(g.conv2d(cur, w1, b1, same));
    auto w2 = take("bott.conv2.w"), b2 = take("bott.conv2.b");
    cur = g.relu(g.conv2d(cur, w2, b2, same));
  }
  for (int i = arch.depth - 1; i >= 0; --i) {
    const std::string d = "dec" + std::to_string(i);
    cur = g.upsample_nearest2(cur);
    auto wu = take(d + ".up.w"), bu = take(d + ".up.b");
    cur = g.relu(g.conv2d(cur, wu, bu, same));
    cur = g.concat_channels(skips[static_cast<size_t>(i)], cur);
    auto w1 = take(d + ".conv1.w"), b1 = take(d + ".conv1.b");
    cur = g.relu(g.conv2d(cur, w1, b1, same));
    auto w2 = take(d + ".conv2.w"), b2 = take(d + ".conv2.b");
    cur = g.relu(g.conv2d(cur, w2, b2, same));
  }
  auto wo = take("out.w"), bo = take("out.b");
  cur = g.conv2d(cur, wo, bo, nn::ConvSpec{1, 0});
  return g.sigmoid(cur);
}

template <typename T>
typename nn::Graph<T>::Id regnet_forward(nn::Graph<T>& g, const ModelState& model,
                                         typename nn::Graph<T>::Id input, bool trainable,
                                         std::vector<typename nn::Graph<T>::Id>* param_ids) {
  const RegNetArch& arch = model.regnet_arch();
  const auto& in_shape = g.value(input).shape;
  if (in_shape.size() != 4 || in_shape[1] != arch.in_channels) {
    throw DimensionError("regnet_forward: input must be (N," + std::to_string(arch.in_channels) +
                         ",n,n)");
  }

  size_t next = 0;
  auto take = [&](const std::string& name) {
    const ParamTensor& p = model.params.at(next);
    if (p.name != name) throw ValidationError("regnet_forward: parameter order mismatch at " + name);
    ++next;
    return param_node(g, p, trainable, param_ids);
  };

  auto cur = input;
  for (int i = 0; i < arch.blocks; ++i) {
    auto w = take("conv" + std::to_string(i) + ".w");
    auto b = take("conv" + std::to_string(i) + ".b");
    cur = g.relu(g.conv2d(cur, w, b, nn::ConvSpec{2, 1}));
  }
  cur = g.global_avg_pool(cur);
  {
    auto w = take("fc1.w"), b = take("fc1.b");
    cur = g.relu(g.linear(cur, w, b));
  }
  {
    auto w = take("fc2.w"), b = take("fc2.b");
    cur = g.relu(g.linear(cur, w, b));
  }
  auto w = take("out.w"), b = take("out.b");
  return g.sigmoid(g.linear(cur, w, b));
}

nn::Tensor<float> reconstruct_batch(const ModelState& recnet, const nn::Tensor<float>& masked) {
  nn::Graph<float> g;
  auto out = recnet_forward(g, recnet, g.constant(masked));
  return g.value(out);
}

Image reconstruct(const ModelState& recnet, const Image& masked) {
  const int n = masked.rows();
  nn::Tensor<float> x({1, 1, n, n});
  x.data = masked.pixels().v;
  nn::Tensor<float> y = reconstruct_batch(recnet, x);
  Grid out(n, n);
  out.v = std::move(y.data);
  // sigmoid output can round to exactly 0 or 1 in float; both are valid
  return Image(std::move(out), masked.spacing_mm());
}

nn::Tensor<float> regressor_input_proposed(const DifferenceImage& dif, const SegMask& seg) {
  if (dif.rows() != seg.rows() || dif.cols() != seg.cols()) {
    throw DimensionError("regressor_input_proposed: shape mismatch");
  }
  const int n = dif.rows();
  nn::Tensor<float> t({2, n, n});
  const size_t hw = static_cast<size_t>(n) * n;
  for (size_t i = 0; i < hw; ++i) t.data[i] = static_cast<float>(dif.pixels().v[i]);
  for (size_t i = 0; i < hw; ++i) t.data[hw + i] = static_cast<float>(seg.labels()[i]);
  return t;
}

nn::Tensor<float> regressor_input_baseline(const Image& image, const SegMask& seg) {
  if (image.rows() != seg.rows() || image.cols() != seg.cols()) {
    throw DimensionError("regressor_input_baseline: shape mismatch");
  }
  const int n = image.rows();
  nn::Tensor<float> t({2, n, n});
  const size_t hw = static_cast<size_t>(n) * n;
  for (size_t i = 0; i < hw; ++i) t.data[i] = image.pixels().v[i];
  for (size_t i = 0; i < hw; ++i) t.data[hw + i] = static_cast<float>(seg.labels()[i]);
  return t;
}

std::vector<float> regnet_predict(const ModelState& regnet, const nn::Tensor<float>& input) {
  nn::Graph<float> g;
  auto out = regnet_forward(g, regnet, g.constant(input));
  return g.value(out).data;
}

QualityScore predict_quality(const ModelState& recnet, const ModelState& regnet, const Image& image,
                             const SegMask& seg) {
  if (regnet.regnet_arch().mode != RegMode::proposed) {
    throw ValidationError("predict_quality: regressor was built in baseline mode; build it in "
                          "proposed mode or call predict_quality_baseline");
  }
  const Image masked = mask_image(image, seg);
  const Image rec = reconstruct(recnet, masked);
  const DifferenceImage dif = difference_image(image, rec);
  nn::Tensor<float> in2 = regressor_input_proposed(dif, seg);
  nn::Tensor<float> batch({1, 2, image.rows(), image.cols()});
  batch.data = std::move(in2.data);
  return QualityScore(regnet_predict(regnet, batch)[0]);
}

QualityScore predict_quality_baseline(const ModelState& regnet, const Image& image,
                                      const SegMask& seg) {
  if (regnet.regnet_arch().mode != RegMode::baseline) {
    throw ValidationError("predict_quality_baseline: regressor was built in proposed mode");
  }
  nn::Tensor<float> in2 = regressor_input_baseline(image, seg);
  nn::Tensor<float> batch({1, 2, image.rows(), image.cols()});
  batch.data = std::move(in2.data);
  return QualityScore(regnet_predict(regnet, batch)[0]);
}

template nn::Graph<float>::Id recnet_forward<float>(nn::Graph<float>&, const ModelState&,
                                                    nn::Graph<float>::Id, bool,
                                                    std::vector<nn::Graph<float>::Id>*);
template nn::Graph<double>::Id recnet_forward<double>(nn::Graph<double>&, const ModelState&,
                                                      nn::Graph<double>::Id, bool,
                                                      std::vector<nn::Graph<double>::Id>*);
template nn::Graph<float>::Id regnet_forward<float>(nn::Graph<float>&, const ModelState&,
                                                    nn::Graph<float>::Id, bool,
                                                    std::vector<nn::Graph<float>::Id>*);
template nn::Graph<double>::Id regnet_forward<double>(nn::Graph<double>&, const ModelState&,
                                                      nn::Graph<double>::Id, bool,
                                                      std::vector<nn::Graph<double>::Id>*);

}  // namespace segqa
