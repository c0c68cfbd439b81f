#include "tactile/model/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "tactile/data/recording.hpp"
#include "tactile/error.hpp"

namespace tactile::model {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (epochs < 1) throw ConfigError("epoch budget must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("moment coefficients must be in [0, 1)");
}

std::size_t EvalReport::class_count(GestureClass c) const {
  const auto& row = confusion[static_cast<std::size_t>(index_of(c))];
  return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

namespace {

float backward(const Matrix<float>& x, int label, const HybridParams<float>& p, HybridParams<float>& g, float scale) {
  return hybrid_backward(x, label, p, g, scale);
}

float backward(const Matrix<float>& x, int label, const LstmParams<float>& p, LstmParams<float>& g, float scale) {
  return lstm_backward(x, label, p, g, scale);
}

template <typename Params>
class Adam {
 public:
  Adam(const Params& like, const TrainConfig& cfg)
      : cfg_(cfg), first_(zeros_like(like)), second_(zeros_like(like)) {}

  void step(Params& params, Params& grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    const auto lr = static_cast<float>(cfg_.learning_rate * std::sqrt(c2) / c1);
    const auto b1 = static_cast<float>(cfg_.beta1), b2 = static_cast<float>(cfg_.beta2);
    const auto eps = static_cast<float>(cfg_.epsilon * std::sqrt(c2));
    auto p = tensor_list(params), g = tensor_list(grads), m = tensor_list(first_), v = tensor_list(second_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto gi = g[i].tensor->array();
      m[i].tensor->array() = b1 * m[i].tensor->array() + (1.0f - b1) * gi;
      v[i].tensor->array() = b2 * v[i].tensor->array() + (1.0f - b2) * gi.square();
      p[i].tensor->array() -= lr * m[i].tensor->array() / (v[i].tensor->array().sqrt() + eps);
    }
  }

 private:
  TrainConfig cfg_;
  Params first_, second_;
  long t_ = 0;
};

template <typename Params>
TrainResult train_impl(const data::Dataset& ds, const TrainConfig& cfg, Params params, const EpochCallback& on_epoch) {
  cfg.validate();
  const auto train_idx = ds.indices(data::Split::Train);
  const auto val_idx = ds.indices(data::Split::Validation);
  if (train_idx.empty() || val_idx.empty()) throw ConfigError("training needs non-empty train and validation splits");

  std::vector<data::Sample> val_samples;
  val_samples.reserve(val_idx.size());
  for (auto i : val_idx) val_samples.push_back(ds.samples[i]);

  Adam<Params> adam(params, cfg);
  Params grads = zeros_like(params);
  TrainResult result{Model{params}, {}, 0};
  double best_accuracy = -1.0;
  int since_best = 0;
  long step = 0;

  std::vector<std::size_t> order = train_idx;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::mt19937_64 rng(data::derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const auto scale = 1.0f / static_cast<float>(end - begin);
      grads.visit([](std::string_view, Matrix<float>& m) { m.setZero(); });
      for (std::size_t k = begin; k < end; ++k) {
        const auto& sample = ds.samples[order[k]];
        const float loss = backward(to_matrix(sample.window), index_of(sample.label), params, grads, scale);
        if (!std::isfinite(loss)) {
          throw DivergenceError("training diverged: non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                                    std::to_string(step),
                                epoch, step);
        }
        loss_sum += loss;
      }
      bool finite = true;
      grads.visit([&](std::string_view, const Matrix<float>& m) { finite = finite && m.allFinite(); });
      if (!finite) {
        throw DivergenceError("training diverged: non-finite gradient at epoch " + std::to_string(epoch) + ", step " +
                                  std::to_string(step),
                              epoch, step);
      }
      adam.step(params, grads);
      ++step;
    }

    EpochReport report;
    report.epoch = epoch;
    report.train_loss = loss_sum / static_cast<double>(order.size());
    report.validation = evaluate(Model{params}, val_samples);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.history.push_back(report);
    if (on_epoch) on_epoch(report);

    if (report.validation.accuracy > best_accuracy) {
      best_accuracy = report.validation.accuracy;
      result.model = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
    if (cfg.target_accuracy && best_accuracy >= *cfg.target_accuracy) break;
  }
  return result;
}

}  // namespace

TrainResult train(const data::Dataset& ds, const TrainConfig& cfg, Architecture arch, const EpochCallback& on_epoch) {
  return train(ds, cfg, make_model(arch, data::derive_seed(cfg.seed, 0xC0FFEE)), on_epoch);
}

TrainResult train(const data::Dataset& ds, const TrainConfig& cfg, Model initial, const EpochCallback& on_epoch) {
  return std::visit([&](auto& p) { return train_impl(ds, cfg, std::move(p), on_epoch); }, initial);
}

EvalReport evaluate(const Model& model, std::span<const data::Sample> samples) {
  EvalReport report;
  double elapsed_ms = 0.0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto probs = classify(model, s.window);
    elapsed_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const auto predicted = argmax(probs);
    ++report.confusion[static_cast<std::size_t>(index_of(s.label))][static_cast<std::size_t>(index_of(predicted))];
    if (predicted == s.label) ++correct;
  }
  report.total = samples.size();
  if (!samples.empty()) {
    report.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    report.mean_latency_ms = elapsed_ms / static_cast<double>(samples.size());
  }
  return report;
}

EvalReport evaluate(const Model& model, const data::Dataset& ds, data::Split split) {
  std::vector<data::Sample> chosen;
  for (auto i : ds.indices(split)) chosen.push_back(ds.samples[i]);
  return evaluate(model, chosen);
}

std::string to_record(const EpochReport& r, Architecture arch) {
  nlohmann::ordered_json j;
  j["type"] = "epoch";
  j["arch"] = std::string(to_string(arch));
  j["epoch"] = r.epoch;
  j["train_loss"] = r.train_loss;
  j["val_accuracy"] = r.validation.accuracy;
  j["val_samples"] = r.validation.total;
  j["latency_ms"] = r.validation.mean_latency_ms;
  j["seconds"] = r.seconds;
  return j.dump();
}

std::string format_confusion(const ConfusionMatrix& confusion) {
  static constexpr std::array<const char*, kNumClasses> kShort = {
      "+Tx", "-Tx", "+Ty", "-Ty", "+Tz", "-Tz", "+Rx", "-Rx", "+Ry", "-Ry", "+Rz", "-Rz", "Ini", "Hom", "Inv"};
  std::ostringstream out;
  out << "true\\pred";
  for (auto s : kShort) out << std::setw(6) << s;
  out << '\n';
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    out << std::setw(9) << kShort[i];
    for (auto n : confusion[i]) out << std::setw(6) << n;
    out << '\n';
  }
  return out.str();
}

}  // namespace tactile::model
