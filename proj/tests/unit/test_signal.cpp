#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "tactile/error.hpp"
#include "tactile/gesture.hpp"
#include "tactile/signal/filter.hpp"
#include "tactile/signal/frame.hpp"

using namespace tactile;

namespace {

RawFrame constant_raw(std::uint16_t counts, std::uint32_t seq = 0) {
  RawFrame f;
  f.counts.fill(counts);
  f.seq = seq;
  f.timestamp_us = seq * 5000ULL;
  return f;
}

TactileFrame constant_frame(double v, std::uint64_t t = 0) {
  TactileFrame f;
  f.values.fill(v);
  f.timestamp_us = t;
  return f;
}

}  // namespace

TEST(Gesture, FifteenClassesRoundTripByName) {
  ASSERT_EQ(kAllClasses.size(), 15u);
  for (int i = 0; i < kNumClasses; ++i) {
    const auto c = class_from_index(i);
    EXPECT_EQ(index_of(c), i);
    EXPECT_EQ(parse_gesture(to_string(c)), c);
  }
  EXPECT_THROW(class_from_index(15), DomainError);
  EXPECT_FALSE(parse_gesture("SwipeSideways"));
  EXPECT_TRUE(is_auxiliary(GestureClass::AuxHome));
  EXPECT_FALSE(is_motion(GestureClass::Invalid));
  EXPECT_EQ(finger_count(GestureClass::TranslateXPos), 2);
  EXPECT_EQ(finger_count(GestureClass::TranslateZNeg), 1);
  EXPECT_EQ(finger_count(GestureClass::AuxInitPose), 5);
}

TEST(Calibrate, ConstantInputGivesConstantMean) {
  std::vector<RawFrame> frames(100, constant_raw(500));
  const auto b = calibrate(frames);
  EXPECT_EQ(b.n_frames, 100);
  for (double m : b.mean_counts) EXPECT_DOUBLE_EQ(m, 500.0);
}

TEST(Calibrate, AlternatingInputAveragesOut) {
  std::vector<RawFrame> frames;
  for (int i = 0; i < 100; ++i) frames.push_back(constant_raw(i % 2 ? 600 : 400, i));
  for (double m : calibrate(frames).mean_counts) EXPECT_DOUBLE_EQ(m, 500.0);
}

TEST(Calibrate, UsesOnlyTheFirstHundredFrames) {
  std::vector<RawFrame> frames(100, constant_raw(500));
  frames.push_back(constant_raw(9000));
  for (double m : calibrate(frames).mean_counts) EXPECT_DOUBLE_EQ(m, 500.0);
}

TEST(Calibrate, NinetyNineFramesIsAnError) {
  std::vector<RawFrame> frames(99, constant_raw(500));
  EXPECT_THROW(calibrate(frames), CalibrationError);
}

TEST(SubtractBaseline, Examples) {
  std::vector<RawFrame> frames(100, constant_raw(500));
  const auto base = calibrate(frames);

  auto same = constant_raw(500, 3);
  const auto zero = subtract_baseline(same, base, 1000.0);
  for (double v : zero.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(zero.timestamp_us, same.timestamp_us);

  auto step = constant_raw(500);
  step.counts[cell_index(4, 7)] = 1500;
  const auto unit = subtract_baseline(step, base, 1000.0);
  for (int i = 0; i < kChannels; ++i) EXPECT_EQ(unit.values[i], i == cell_index(4, 7) ? 1.0 : 0.0);

  auto twice = constant_raw(2500);
  for (double v : subtract_baseline(twice, base, 1000.0).values) EXPECT_EQ(v, kClampHigh);
  auto below = constant_raw(0);
  for (double v : subtract_baseline(below, base, 1000.0).values) EXPECT_EQ(v, kClampLow);

  EXPECT_THROW(subtract_baseline(same, base, 0.0), DomainError);
  EXPECT_THROW(subtract_baseline(same, base, -2.0), DomainError);
}

TEST(SubtractBaseline, CalibrationSegmentMapsToZero) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> counts(300, 700);
  std::vector<RawFrame> frames(100);
  for (auto& f : frames) {
    for (auto& c : f.counts) c = static_cast<std::uint16_t>(counts(rng));
  }
  const auto base = calibrate(frames);
  // The calibration mean itself, expressed as a frame, subtracts to zero.
  TactileFrame mean_frame;
  for (int i = 0; i < kChannels; ++i) {
    double s = 0.0;
    for (const auto& f : frames) s += f.counts[i];
    mean_frame.values[i] = s / 100.0 - base.mean_counts[i];
  }
  for (double v : mean_frame.values) EXPECT_NEAR(v, 0.0, 1e-9);
  for (const auto& f : frames) {
    for (double v : subtract_baseline(f, base, 1000.0).values) {
      EXPECT_GE(v, kClampLow);
      EXPECT_LE(v, kClampHigh);
    }
  }
}

TEST(MovingAverage, ConstantIsAFixedPoint) {
  std::vector<TactileFrame> in(50, constant_frame(5.0));
  for (const auto& f : moving_average(in, 20)) {
    for (double v : f.values) EXPECT_EQ(v, 5.0);
  }
}

TEST(MovingAverage, ImpulseResponseIsOneTwentiethForTwentyFrames) {
  std::vector<TactileFrame> in(50, constant_frame(0.0));
  in[22].values[cell_index(2, 2)] = 20.0;
  const auto out = moving_average(in, 20);
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double expect = (t >= 22 && t < 42) ? 1.0 : 0.0;
    EXPECT_DOUBLE_EQ(out[t].values[cell_index(2, 2)], expect) << "t=" << t;
    EXPECT_EQ(out[t].values[cell_index(2, 3)], 0.0);
  }
}

TEST(MovingAverage, StepSettlesAfterExactlyTwentyFrames) {
  std::vector<TactileFrame> in;
  for (int t = 0; t < 30; ++t) in.push_back(constant_frame(0.0));
  for (int t = 0; t < 40; ++t) in.push_back(constant_frame(1.0));
  const auto out = moving_average(in, 20);
  // Step enters at index 30; index 49 is the 20th frame of ones.
  EXPECT_LT(out[48].values[0], 1.0);
  EXPECT_EQ(out[49].values[0], 1.0);
  EXPECT_EQ(out[69].values[0], 1.0);
}

TEST(MovingAverage, ShortHistoryAveragesWhatIsAvailable) {
  std::vector<TactileFrame> in{constant_frame(2.0, 0), constant_frame(4.0, 5000), constant_frame(9.0, 10000)};
  const auto out = moving_average(in, 20);
  EXPECT_DOUBLE_EQ(out[0].values[0], 2.0);
  EXPECT_DOUBLE_EQ(out[1].values[0], 3.0);
  EXPECT_DOUBLE_EQ(out[2].values[0], 5.0);
  EXPECT_EQ(out[2].timestamp_us, 10000u);
  EXPECT_THROW(MovingAverage(0), DomainError);
}

TEST(MovingAverage, IsLinear) {
  std::mt19937 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<TactileFrame> x(60), y(60), mix(60);
  const double a = 0.7, b = -1.9;
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (int i = 0; i < kChannels; ++i) {
      x[t].values[i] = n(rng);
      y[t].values[i] = n(rng);
      mix[t].values[i] = a * x[t].values[i] + b * y[t].values[i];
    }
  }
  const auto fx = moving_average(x, 20), fy = moving_average(y, 20), fm = moving_average(mix, 20);
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (int i = 0; i < kChannels; ++i) {
      EXPECT_NEAR(fm[t].values[i], a * fx[t].values[i] + b * fy[t].values[i], 1e-9);
    }
  }
}
