#include "segqa/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "segqa/checkpoint.hpp"
#include "segqa/hash.hpp"

namespace segqa {

namespace fs = std::filesystem;

namespace {

struct Example {
  nn::Tensor<float> input;   // without batch dim
  nn::Tensor<float> target;  // without batch dim
};

using ForwardFn = nn::Graph<float>::Id (*)(nn::Graph<float>&, const ModelState&,
                                           nn::Graph<float>::Id, bool,
                                           std::vector<nn::Graph<float>::Id>*);

nn::Tensor<float> stack(const std::vector<Example>& ex, const std::vector<int>& idx, size_t from,
                        size_t to, bool targets) {
  const nn::Tensor<float>& first = targets ? ex[0].target : ex[0].input;
  std::vector<int> shape;
  shape.push_back(static_cast<int>(to - from));
  for (int d : first.shape) shape.push_back(d);
  nn::Tensor<float> out(shape);
  const size_t stride = static_cast<size_t>(first.numel());
  for (size_t k = from; k < to; ++k) {
    const nn::Tensor<float>& t =
        targets ? ex[static_cast<size_t>(idx[k])].target : ex[static_cast<size_t>(idx[k])].input;
    std::copy(t.data.begin(), t.data.end(), out.data.begin() + (k - from) * stride);
  }
  return out;
}

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, float lr) : kind_(kind), lr_(lr) {}

  void step(std::vector<ParamTensor>& params, const std::vector<const nn::Tensor<float>*>& grads) {
    if (kind_ == OptimizerKind::sgd) {
      for (size_t p = 0; p < params.size(); ++p) {
        auto& w = params[p].data;
        const auto& g = grads[p]->data;
        for (size_t i = 0; i < w.size(); ++i) w[i] -= lr_ * g[i];
      }
      return;
    }
    if (m_.empty()) {
      m_.resize(params.size());
      v_.resize(params.size());
      for (size_t p = 0; p < params.size(); ++p) {
        m_[p].assign(params[p].data.size(), 0.0f);
        v_[p].assign(params[p].data.size(), 0.0f);
      }
    }
    ++t_;
    const float bc1 = 1.0f - std::pow(kBeta1, static_cast<float>(t_));
    const float bc2 = 1.0f - std::pow(kBeta2, static_cast<float>(t_));
    for (size_t p = 0; p < params.size(); ++p) {
      auto& w = params[p].data;
      const auto& g = grads[p]->data;
      auto& m = m_[p];
      auto& v = v_[p];
      for (size_t i = 0; i < w.size(); ++i) {
        m[i] = kBeta1 * m[i] + (1.0f - kBeta1) * g[i];
        v[i] = kBeta2 * v[i] + (1.0f - kBeta2) * g[i] * g[i];
        const float mhat = m[i] / bc1;
        const float vhat = v[i] / bc2;
        w[i] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
      }
    }
  }

 private:
  static constexpr float kBeta1 = 0.9f;
  static constexpr float kBeta2 = 0.999f;
  static constexpr float kEps = 1e-8f;
  OptimizerKind kind_;
  float lr_;
  int t_ = 0;
  std::vector<std::vector<float>> m_, v_;
};

double dataset_loss(const ModelState& model, ForwardFn forward, const std::vector<Example>& ex,
                    int batch_size) {
  if (ex.empty()) return 0.0;
  std::vector<int> idx(ex.size());
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0.0;
  for (size_t from = 0; from < ex.size(); from += static_cast<size_t>(batch_size)) {
    const size_t to = std::min(ex.size(), from + static_cast<size_t>(batch_size));
    nn::Graph<float> g;
    auto out = forward(g, model, g.constant(stack(ex, idx, from, to, false)), false, nullptr);
    auto loss = g.mse(out, g.constant(stack(ex, idx, from, to, true)));
    sum += static_cast<double>(g.value(loss).data[0]) * static_cast<double>(to - from);
  }
  return sum / static_cast<double>(ex.size());
}

void validate_config(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ValidationError("TrainConfig.epochs must be >= 1");
  if (cfg.batch_size < 1) throw ValidationError("TrainConfig.batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0f)) throw ValidationError("TrainConfig.learning_rate must be > 0");
  if (cfg.early_stop_patience && *cfg.early_stop_patience < 1) {
    throw ValidationError("TrainConfig.early_stop_patience must be >= 1");
  }
}

std::string config_fingerprint(const TrainConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "epochs=%d;batch=%d;lr=%.9g;seed=%llu;opt=%s;patience=%d",
                cfg.epochs, cfg.batch_size, static_cast<double>(cfg.learning_rate),
                static_cast<unsigned long long>(cfg.seed), to_string(cfg.optimizer).c_str(),
                cfg.early_stop_patience ? *cfg.early_stop_patience : -1);
  return sha256_hex(buf);
}

void write_config_snapshot(const TrainConfig& cfg, const fs::path& run_dir) {
  std::ofstream f(run_dir / "config.json", std::ios::binary);
  if (!f) throw IoError("cannot write training config snapshot");
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"epochs\":%d,\"batch_size\":%d,\"learning_rate\":%.9g,\"seed\":%llu,"
                "\"optimizer\":\"%s\",\"early_stop_patience\":%s}",
                cfg.epochs, cfg.batch_size, static_cast<double>(cfg.learning_rate),
                static_cast<unsigned long long>(cfg.seed), to_string(cfg.optimizer).c_str(),
                cfg.early_stop_patience ? std::to_string(*cfg.early_stop_patience).c_str() : "null");
  f << buf << "\n";
}

ModelState run_training(ModelState model, ForwardFn forward, const std::vector<Example>& train,
                        const std::vector<Example>& val, const TrainConfig& cfg,
                        const std::optional<fs::path>& run_dir) {
  validate_config(cfg);
  if (train.empty()) throw ValidationError("training: train split is empty");

  model.meta.seed = cfg.seed;
  model.meta.config_hash = config_fingerprint(cfg);
  model.meta.loss_history.clear();
  model.meta.val_loss_history.clear();

  std::ofstream metrics;
  if (run_dir) {
    fs::create_directories(*run_dir);
    write_config_snapshot(cfg, *run_dir);
    metrics.open(*run_dir / "metrics.csv", std::ios::binary);
    if (!metrics) throw IoError("cannot write metrics.csv");
    metrics << "epoch,train_loss,val_loss\n";
  }

  Optimizer opt(cfg.optimizer, cfg.learning_rate);
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<ParamTensor> best_params = model.params;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int epochs_since_best = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (size_t from = 0; from < train.size(); from += static_cast<size_t>(cfg.batch_size)) {
      const size_t to = std::min(train.size(), from + static_cast<size_t>(cfg.batch_size));
      nn::Graph<float> g;
      std::vector<nn::Graph<float>::Id> pids;
      auto out = forward(g, model, g.constant(stack(train, order, from, to, false)), true, &pids);
      auto loss = g.mse(out, g.constant(stack(train, order, from, to, true)));
      g.backward(loss);
      loss_sum += static_cast<double>(g.value(loss).data[0]) * static_cast<double>(to - from);
      std::vector<const nn::Tensor<float>*> grads;
      grads.reserve(pids.size());
      for (auto id : pids) grads.push_back(&g.grad(id));
      opt.step(model.params, grads);
    }
    const double train_loss = loss_sum / static_cast<double>(train.size());
    const double val_loss =
        val.empty() ? train_loss : dataset_loss(model, forward, val, cfg.batch_size);
    model.meta.loss_history.push_back(static_cast<float>(train_loss));
    model.meta.val_loss_history.push_back(static_cast<float>(val_loss));
    model.meta.epochs_trained = epoch;

    if (metrics) {
      char row[96];
      std::snprintf(row, sizeof(row), "%d,%.9g,%.9g\n", epoch, train_loss, val_loss);
      metrics << row;
      metrics.flush();
    }

    if (val_loss < best_val) {
      best_val = val_loss;
      best_epoch = epoch;
      best_params = model.params;
      epochs_since_best = 0;
      if (run_dir) save_checkpoint(model, *run_dir / "best");
    } else {
      ++epochs_since_best;
    }
    if (run_dir) save_checkpoint(model, *run_dir / "last");
    if (cfg.early_stop_patience && epochs_since_best >= *cfg.early_stop_patience) break;
  }

  // Published artifact: parameters of the lowest-validation-loss epoch.
  model.params = std::move(best_params);
  if (run_dir) save_checkpoint(model, *run_dir / "best");
  (void)best_epoch;
  return model;
}

}  // namespace

std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "sgd";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw ValidationError("unknown optimizer '" + s + "' (expected adam|sgd)");
}

ModelState train_recnet(ModelState model, const ISampleStore& train, const ISampleStore& val,
                        const TrainConfig& cfg, const std::optional<fs::path>& run_dir) {
  if (!model.is_recnet()) throw ValidationError("train_recnet: model is not a REC-Net");
  if (train.size() == 0) throw ValidationError("train_recnet: train split is empty");

  // Only pairs of image and ground-truth mask are used here.
  auto to_examples = [](const ISampleStore& store) {
    std::vector<Example> ex;
    ex.reserve(static_cast<size_t>(store.size()));
    for (int i = 0; i < store.size(); ++i) {
      const Image img = store.image(i);
      const Image masked = mask_image(img, store.gt_mask(i));
      const int n = img.rows();
      Example e{nn::Tensor<float>({1, n, n}), nn::Tensor<float>({1, n, n})};
      e.input.data = masked.pixels().v;
      e.target.data = img.pixels().v;
      ex.push_back(std::move(e));
    }
    return ex;
  };

  return run_training(std::move(model), &recnet_forward<float>, to_examples(train),
                      to_examples(val), cfg, run_dir);
}

std::vector<nn::Tensor<float>> regressor_inputs_for_store(const ModelState* recnet, RegMode mode,
                                                          const ISampleStore& store) {
  std::vector<nn::Tensor<float>> inputs;
  inputs.reserve(static_cast<size_t>(store.size()));
  if (mode == RegMode::baseline) {
    for (int i = 0; i < store.size(); ++i) {
      inputs.push_back(regressor_input_baseline(store.image(i), store.candidate_mask(i)));
    }
    return inputs;
  }
  if (!recnet) {
    throw ValidationError(
        "proposed mode requires a trained REC-Net; none was provided (run train_rec first)");
  }
  constexpr int kChunk = 16;
  for (int from = 0; from < store.size(); from += kChunk) {
    const int to = std::min(store.size(), from + kChunk);
    std::vector<Image> images;
    std::vector<SegMask> candidates;
    for (int i = from; i < to; ++i) {
      images.push_back(store.image(i));
      candidates.push_back(store.candidate_mask(i));
    }
    const int n = images[0].rows();
    nn::Tensor<float> batch({to - from, 1, n, n});
    for (int k = 0; k < to - from; ++k) {
      const Image masked = mask_image(images[static_cast<size_t>(k)], candidates[static_cast<size_t>(k)]);
      std::copy(masked.pixels().v.begin(), masked.pixels().v.end(),
                batch.data.begin() + static_cast<size_t>(k) * n * n);
    }
    const nn::Tensor<float> rec = reconstruct_batch(*recnet, batch);
    for (int k = 0; k < to - from; ++k) {
      Grid rec_grid(n, n);
      std::copy(rec.data.begin() + static_cast<size_t>(k) * n * n,
                rec.data.begin() + static_cast<size_t>(k + 1) * n * n, rec_grid.v.begin());
      const DifferenceImage dif =
          difference_image(images[static_cast<size_t>(k)], Image(std::move(rec_grid)));
      inputs.push_back(regressor_input_proposed(dif, candidates[static_cast<size_t>(k)]));
    }
  }
  return inputs;
}

ModelState train_regressor(ModelState model, const ModelState* recnet, const ISampleStore& train,
                           const ISampleStore& val, const TrainConfig& cfg,
                           const std::optional<fs::path>& run_dir) {
  if (!model.is_regnet()) throw ValidationError("train_regressor: model is not a REG-Net");
  if (train.size() == 0) throw ValidationError("train_regressor: train split is empty");
  const RegMode mode = model.regnet_arch().mode;
  if (mode == RegMode::proposed && !recnet) {
    throw ValidationError(
        "train_regressor: proposed mode requires a trained REC-Net (run train_rec first)");
  }

  auto to_examples = [&](const ISampleStore& store) {
    std::vector<Example> ex;
    auto inputs = regressor_inputs_for_store(mode == RegMode::proposed ? recnet : nullptr, mode,
                                             store);
    for (int i = 0; i < store.size(); ++i) {
      Example e{std::move(inputs[static_cast<size_t>(i)]), nn::Tensor<float>({1})};
      e.target.data[0] = store.gt_dice(i);
      ex.push_back(std::move(e));
    }
    return ex;
  };

  return run_training(std::move(model), &regnet_forward<float>, to_examples(train),
                      to_examples(val), cfg, run_dir);
}

std::vector<float> predict_store(const ModelState& regnet, const ModelState* recnet,
                                 const ISampleStore& store) {
  const RegMode mode = regnet.regnet_arch().mode;
  auto inputs = regressor_inputs_for_store(recnet, mode, store);
  std::vector<float> preds;
  preds.reserve(inputs.size());
  constexpr int kChunk = 32;
  for (size_t from = 0; from < inputs.size(); from += kChunk) {
    const size_t to = std::min(inputs.size(), from + kChunk);
    const auto& shape = inputs[from].shape;  // (2,n,n)
    nn::Tensor<float> batch({static_cast<int>(to - from), shape[0], shape[1], shape[2]});
    const size_t stride = static_cast<size_t>(inputs[from].numel());
    for (size_t k = from; k < to; ++k) {
      std::copy(inputs[k].data.begin(), inputs[k].data.end(),
                batch.data.begin() + (k - from) * stride);
    }
    for (float p : regnet_predict(regnet, batch)) preds.push_back(p);
  }
  return preds;
}

}  // namespace segqa
