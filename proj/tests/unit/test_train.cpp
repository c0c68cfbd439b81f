#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tactile/error.hpp"
#include "tactile/model/train.hpp"
#include "tactile/signal/frame.hpp"

using namespace tactile;
using namespace tactile::model;

namespace {

// One finger sliding up or down a random column over the window, on light noise.
data::Sample swipe(bool up, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double col = 1.0 + 7.0 * u(rng), start = 7.0 + 2.0 * u(rng), travel = 4.0 + 3.0 * u(rng);
  const int first = static_cast<int>(6 * u(rng)), frames = 18 + static_cast<int>(6 * u(rng));
  data::Sample s;
  s.label = up ? GestureClass::TranslateZPos : GestureClass::TranslateZNeg;
  for (int t = 0; t < data::kWindowFrames; ++t) {
    const double k = std::clamp(static_cast<double>(t - first) / frames, 0.0, 1.0);
    const double row = up ? start - travel * k : (9.0 - start) + travel * k;
    const bool touching = t >= first && t < first + frames;
    for (int r = 0; r < kGridRows; ++r)
      for (int c = 0; c < kGridCols; ++c) {
        const double d2 = (r - row) * (r - row) + (c - col) * (c - col);
        const double v = (touching ? 0.8 * std::exp(-d2 / 2.0) : 0.0) + noise(rng);
        s.window.at(t, cell_index(r, c)) = static_cast<float>(v);
      }
  }
  return s;
}

data::Dataset swipe_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  data::Dataset ds;
  ds.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    ds.samples.push_back(swipe(i % 2 == 0, rng));
    ds.split.push_back(i % 5 == 4 ? data::Split::Validation : data::Split::Train);
  }
  return ds;
}

}  // namespace

TEST(Train, SeparatesUpFromDownSwipesWithinFiveEpochs) {
  const auto ds = swipe_dataset(200, 11);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 16;
  cfg.patience = 5;
  const auto result = train(ds, cfg, Architecture::Hybrid);
  ASSERT_FALSE(result.history.empty());
  double best = 0.0;
  for (const auto& e : result.history) best = std::max(best, e.validation.accuracy);
  EXPECT_GE(best, 0.99);

  const auto fresh = swipe_dataset(100, 12);
  EXPECT_GE(evaluate(result.model, fresh.samples).accuracy, 0.95);
}

TEST(Train, SameSeedGivesIdenticalWeights) {
  const auto ds = swipe_dataset(60, 3);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 8;
  for (auto arch : {Architecture::Hybrid, Architecture::Lstm}) {
    const auto a = train(ds, cfg, arch), b = train(ds, cfg, arch);
    EXPECT_EQ(a.history[0].train_loss, b.history[0].train_loss);
    const auto w = ds.samples[0].window;
    EXPECT_EQ(classify(a.model, w), classify(b.model, w));
  }
}

TEST(Train, HugeLearningRateDiverges) {
  const auto ds = swipe_dataset(60, 5);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e3;
  try {
    train(ds, cfg, Architecture::Hybrid);
    ADD_FAILURE() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.epoch(), 1);
    EXPECT_GE(e.step(), 0);
  }
}

TEST(Train, InvalidConfigOrEmptySplitIsRejected) {
  const auto ds = swipe_dataset(20, 5);
  TrainConfig cfg;
  cfg.batch_size = 0;
  EXPECT_THROW(train(ds, cfg, Architecture::Lstm), ConfigError);
  cfg = TrainConfig{};
  cfg.learning_rate = -1.0;
  EXPECT_THROW(train(ds, cfg, Architecture::Lstm), ConfigError);
  auto only_val = ds;
  for (auto& s : only_val.split) s = data::Split::Validation;
  EXPECT_THROW(train(only_val, TrainConfig{}, Architecture::Lstm), ConfigError);
}

TEST(Train, TargetAccuracyStopsEarly) {
  const auto ds = swipe_dataset(100, 8);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 16;
  cfg.target_accuracy = 0.5;
  int calls = 0;
  const auto r = train(ds, cfg, Architecture::Hybrid, [&](const EpochReport&) { ++calls; });
  EXPECT_EQ(calls, static_cast<int>(r.history.size()));
  EXPECT_LT(r.history.size(), 10u);
  EXPECT_GE(r.history.back().validation.accuracy, 0.5);
}

TEST(Evaluate, MemorizedTrainingDataScoresPerfectly) {
  // Label each sample by a cell it lights up; a model trained long enough on these
  // few samples must reproduce them exactly.
  std::mt19937_64 rng(4);
  data::Dataset ds;
  for (int i = 0; i < 30; ++i) {
    data::Sample s;
    const auto cls = kAllClasses[static_cast<std::size_t>(i % kNumClasses)];
    s.label = cls;
    for (int t = 0; t < data::kWindowFrames; ++t) s.window.at(t, index_of(cls) * 5 + i % 3) = 1.0f;
    ds.samples.push_back(s);
    ds.split.push_back(data::Split::Train);
  }
  for (std::size_t i = 0; i < 30; ++i) {
    ds.samples.push_back(ds.samples[i]);
    ds.split.push_back(data::Split::Validation);
  }
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 10;
  cfg.patience = 40;
  cfg.target_accuracy = 1.0;
  const auto r = train(ds, cfg, Architecture::Lstm);
  const auto report = evaluate(r.model, ds, data::Split::Train);
  EXPECT_EQ(report.accuracy, 1.0);
  EXPECT_EQ(report.total, 30u);
}

TEST(Evaluate, ConfusionRowsSumToClassCounts) {
  const auto ds = swipe_dataset(50, 9);
  const auto m = make_model(Architecture::Lstm, 2);
  const auto report = evaluate(m, ds.samples);
  EXPECT_EQ(report.total, 50u);
  std::size_t diag = 0, all = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::size_t row = 0, expect = 0;
    for (auto v : report.confusion[static_cast<std::size_t>(c)]) row += v;
    for (const auto& s : ds.samples) expect += s.label == class_from_index(c) ? 1 : 0;
    EXPECT_EQ(row, expect);
    EXPECT_EQ(report.class_count(class_from_index(c)), expect);
    diag += report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    all += row;
  }
  EXPECT_DOUBLE_EQ(report.accuracy, static_cast<double>(diag) / static_cast<double>(all));
  EXPECT_GT(report.mean_latency_ms, 0.0);
}

TEST(Evaluate, RecordsAreSingleLines) {
  EpochReport e;
  e.epoch = 3;
  e.train_loss = 0.25;
  e.validation.accuracy = 0.5;
  const auto rec = to_record(e, Architecture::Hybrid);
  EXPECT_EQ(rec.find('\n'), std::string::npos);
  EXPECT_NE(rec.find("\"epoch\":3"), std::string::npos);
  EXPECT_NE(format_confusion(ConfusionMatrix{}).find("+Tz"), std::string::npos);
}
