#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tactile/data/dataset.hpp"
#include "tactile/model/classifier.hpp"

namespace tactile::model {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 20;
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int patience = 3;  // epochs without validation improvement before stopping
  /// Stop as soon as validation accuracy reaches this value (off when unset).
  std::optional<double> target_accuracy;

  void validate() const;
};

using ConfusionMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;  // [true][predicted]

struct EvalReport {
  double accuracy = 0.0;
  ConfusionMatrix confusion{};
  double mean_latency_ms = 0.0;
  std::size_t total = 0;

  std::size_t class_count(GestureClass c) const;
};

struct EpochReport {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  EvalReport validation;
  double seconds = 0.0;
};

struct TrainResult {
  Model model;  // parameters of the best validation epoch
  std::vector<EpochReport> history;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochReport&)>;

/// Mini-batch Adam over the training split, validating after every epoch.
/// Single-threaded and deterministic in cfg.seed. Throws DivergenceError on a
/// non-finite loss or gradient, ConfigError on an invalid config or empty split.
TrainResult train(const data::Dataset& ds, const TrainConfig& cfg, Architecture arch,
                  const EpochCallback& on_epoch = {});

/// Same, continuing from given initial parameters.
TrainResult train(const data::Dataset& ds, const TrainConfig& cfg, Model initial, const EpochCallback& on_epoch = {});

EvalReport evaluate(const Model& model, const data::Dataset& ds, data::Split split);
EvalReport evaluate(const Model& model, std::span<const data::Sample> samples);

/// One structured text record (JSON object, stable key order) for an epoch.
std::string to_record(const EpochReport& report, Architecture arch);

/// Fixed-width text rendering of a confusion matrix with class abbreviations.
std::string format_confusion(const ConfusionMatrix& confusion);

}  // namespace tactile::model
