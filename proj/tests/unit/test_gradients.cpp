#include <gtest/gtest.h>

#include "gradcheck.hpp"

using namespace tactile;

TEST(GradientCheck, EveryHybridTensorMatchesFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto report = testkit::hybrid_gradient_report(seed);
    // conv x2, proj, 2 layers x 12, head x 2: weight + bias each
    EXPECT_EQ(report.size(), 6u + 24u + 4u);
    for (const auto& t : report) EXPECT_LT(t.relative_error, 1e-4) << t.name << " seed " << seed;
  }
}

TEST(GradientCheck, EveryLstmTensorMatchesFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto report = testkit::lstm_gradient_report(seed);
    EXPECT_EQ(report.size(), 8u);
    for (const auto& t : report) EXPECT_LT(t.relative_error, 1e-4) << t.name << " seed " << seed;
  }
}

TEST(GradientCheck, ScalingTheLossScalesEveryGradient) {
  const auto cfg = testkit::small_hybrid_config();
  const auto p = model::init_hybrid<double>(cfg, 4);
  const auto w = testkit::random_window(cfg.seq_len, cfg.cells(), 5);
  auto g1 = model::zeros_like(p), g2 = model::zeros_like(p);
  model::hybrid_backward<double>(w, 2, p, g1, 1.0);
  model::hybrid_backward<double>(w, 2, p, g2, 2.0);
  const auto a = model::tensor_list(g1), b = model::tensor_list(g2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT((*b[i].tensor - 2.0 * *a[i].tensor).norm(), 1e-12 * (1.0 + a[i].tensor->norm())) << a[i].name;
  }

  const auto lc = testkit::small_lstm_config();
  const auto lp = model::init_lstm<double>(lc, 4);
  const auto lw = testkit::random_window(lc.seq_len, lc.input, 6);
  auto l1 = model::zeros_like(lp), l2 = model::zeros_like(lp);
  model::lstm_backward<double>(lw, 2, lp, l1, 1.0);
  model::lstm_backward<double>(lw, 2, lp, l2, 2.0);
  const auto la = model::tensor_list(l1), lb = model::tensor_list(l2);
  for (std::size_t i = 0; i < la.size(); ++i) {
    EXPECT_LT((*lb[i].tensor - 2.0 * *la[i].tensor).norm(), 1e-12 * (1.0 + la[i].tensor->norm())) << la[i].name;
  }
}

TEST(GradientCheck, DeadPathHasZeroGradient) {
  // With head1 weights and bias zero the hidden layer is all zero, so ReLU masks every
  // path into head1 from above and nothing reaches the encoder or the stem.
  const auto cfg = testkit::small_hybrid_config();
  auto p = model::init_hybrid<double>(cfg, 8);
  p.head1_weight.setZero();
  p.head1_bias.setConstant(-1.0);
  auto g = model::zeros_like(p);
  model::hybrid_backward<double>(testkit::random_window(cfg.seq_len, cfg.cells(), 1), 0, p, g, 1.0);
  EXPECT_EQ(g.head1_bias.norm(), 0.0);
  EXPECT_EQ(g.head1_weight.norm(), 0.0);
  EXPECT_EQ(g.head2_weight.norm(), 0.0);
  EXPECT_EQ(g.conv1_weight.norm(), 0.0);
  EXPECT_EQ(g.layers[0].qkv_weight.norm(), 0.0);
  EXPECT_GT(g.head2_bias.norm(), 0.0);
}
