#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "tactile/data/augment.hpp"
#include "tactile/data/dataset.hpp"
#include "tactile/data/recording.hpp"
#include "tactile/error.hpp"
#include "test_util.hpp"

using namespace tactile;
using namespace tactile::data;

namespace {

const Recording& swipe_recording() {
  static const Recording rec = synthesize_recording(GestureClass::TranslateZPos, 17, skin::NoiseModel{});
  return rec;
}

// Ten recordings per gesture, none for Invalid: the 140-recording layout.
std::vector<Recording> gesture_corpus(std::uint64_t seed) {
  std::vector<Recording> recs;
  for (GestureClass c : kAllClasses) {
    if (c == GestureClass::Invalid) continue;
    for (int i = 0; i < 10; ++i) recs.push_back(synthesize_recording(c, recording_seed(seed, c, i), skin::NoiseModel{}));
  }
  return recs;
}

void expect_stratified(const Dataset& ds) {
  std::map<GestureClass, std::array<std::size_t, 2>> per_class;
  for (std::size_t i = 0; i < ds.size(); ++i) ++per_class[ds.samples[i].label][static_cast<int>(ds.split[i])];
  for (const auto& [label, counts] : per_class) {
    const std::size_t n = counts[0] + counts[1];
    EXPECT_EQ(counts[1], validation_count(n)) << to_string(label);
    const double val_share = static_cast<double>(counts[1]) / static_cast<double>(n);
    if (n >= 100) EXPECT_NEAR(val_share, 0.15, 0.02);
  }
}

}  // namespace

TEST(Recording, ProcessedStreamStaysInClampRange) {
  const auto& rec = swipe_recording();
  ASSERT_FALSE(rec.frames.empty());
  EXPECT_LE(rec.core.end, rec.frames.size());
  EXPECT_GE(rec.core.size(), kMinCoreFrames);
  for (const auto& f : rec.frames) {
    for (double v : f.values) {
      EXPECT_GE(v, kClampLow);
      EXPECT_LE(v, kClampHigh);
    }
  }
  // The gesture actually lives inside the core span.
  double inside = 0.0, outside = 0.0;
  for (std::size_t t = 0; t < rec.frames.size(); ++t) {
    const double peak = rec.frames[t].max_value();
    if (t >= rec.core.begin && t < rec.core.end) inside = std::max(inside, peak);
    else if (t + kFilterWindow < rec.core.begin) outside = std::max(outside, peak);
  }
  EXPECT_GT(inside, 0.15);
  EXPECT_LT(outside, 0.1);
}

TEST(Recording, ProcessCaptureRejectsShortOrBadSpans) {
  const auto raw = synthesize_raw(GestureClass::TranslateYNeg, 5, skin::NoiseModel{});
  EXPECT_THROW(process_capture(std::span(raw.frames).first(99), raw.label, raw.contact), CalibrationError);
  EXPECT_THROW(process_capture(raw.frames, raw.label, FrameSpan{10, 20}), Error);
}

TEST(Augment, ProducesExactlyNWindows) {
  const auto samples = augment_recording(swipe_recording(), 1000, 3);
  ASSERT_EQ(samples.size(), 1000u);
  for (const auto& s : samples) {
    EXPECT_EQ(s.window.values.size(), 3000u);
    EXPECT_EQ(s.label, GestureClass::TranslateZPos);
  }
}

TEST(Augment, FullLengthSliceAtOffsetZeroCoversWindow) {
  const auto& rec = swipe_recording();
  ASSERT_GE(rec.core.size(), 30u);
  const SlicePlacement p{rec.core.begin, 30, 0, 99};
  const auto s = compose_sample(rec, p);
  const auto canvas = noise_canvas(99);
  for (int t = 0; t < kWindowFrames; ++t) {
    for (int c = 0; c < kChannels; ++c) {
      const double expect = std::clamp(static_cast<double>(canvas.at(t, c)) + rec.frames[rec.core.begin + t].values[c],
                                       kClampLow, kClampHigh);
      EXPECT_NEAR(s.window.at(t, c), expect, 1e-6);
    }
  }
}

TEST(Augment, NonNoiseContentIsAContiguousCoreSubsequence) {
  const auto& rec = swipe_recording();
  const auto detailed = augment_recording_detailed(rec, 300, 21);
  std::set<int> lengths;
  for (const auto& d : detailed) {
    const auto& p = d.placement;
    lengths.insert(p.length);
    EXPECT_GE(p.length, kSliceMin);
    EXPECT_LE(p.length, kSliceMax);
    EXPECT_GE(p.offset, 0);
    EXPECT_LE(p.offset + p.length, kWindowFrames);
    EXPECT_GE(p.source_begin, rec.core.begin);
    EXPECT_LE(p.source_begin + static_cast<std::size_t>(p.length), rec.core.end);
    // Residual against the canvas is exactly the recording slice, frame by frame.
    const auto canvas = noise_canvas(p.canvas_seed);
    for (int t = 0; t < kWindowFrames; ++t) {
      const bool in_slice = t >= p.offset && t < p.offset + p.length;
      for (int c = 0; c < kChannels; c += 7) {
        double expect = canvas.at(t, c);
        if (in_slice) expect += rec.frames[p.source_begin + static_cast<std::size_t>(t - p.offset)].values[c];
        EXPECT_NEAR(d.sample.window.at(t, c), std::clamp(expect, kClampLow, kClampHigh), 1e-6);
      }
    }
  }
  EXPECT_GT(lengths.size(), 10u);
}

TEST(Augment, LabelledWindowsAlwaysCarrySignal) {
  const auto detailed = augment_recording_detailed(swipe_recording(), 200, 8);
  for (const auto& d : detailed) {
    float peak = 0.0f;
    for (int t = d.placement.offset; t < d.placement.offset + d.placement.length; ++t) {
      for (int c = 0; c < kChannels; ++c) peak = std::max(peak, d.sample.window.at(t, c));
    }
    EXPECT_GT(peak, 0.1f);
  }
}

TEST(Augment, SliceIsClippedToShortCores) {
  Recording rec = swipe_recording();
  rec.core.end = rec.core.begin + 7;
  for (const auto& d : augment_recording_detailed(rec, 50, 4)) EXPECT_EQ(d.placement.length, 7);
}

TEST(Augment, Errors) {
  Recording rec = swipe_recording();
  EXPECT_THROW(augment_recording(rec, 0, 1), AugmentationError);
  rec.core.end = rec.core.begin + 4;
  EXPECT_THROW(augment_recording(rec, 10, 1), AugmentationError);
}

TEST(Augment, IsDeterministic) {
  EXPECT_EQ(augment_recording(swipe_recording(), 20, 5), augment_recording(swipe_recording(), 20, 5));
  EXPECT_NE(augment_recording(swipe_recording(), 20, 5), augment_recording(swipe_recording(), 20, 6));
}

TEST(NoiseCanvas, MatchesFilteredSimulatorNoise) {
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = noise_canvas(seed);
    for (float v : c.values) {
      sum += v;
      sq += static_cast<double>(v) * v;
      ++n;
    }
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 2e-3);
  // sigma 0.02 averaged over 20 frames.
  EXPECT_NEAR(sd, 0.02 / std::sqrt(20.0), 1.5e-3);
}

TEST(Dataset, HundredFortyRecordingsTimesHundred) {
  const auto recs = gesture_corpus(1);
  ASSERT_EQ(recs.size(), 140u);
  const auto ds = build_dataset(recs, 100, 7);
  EXPECT_EQ(ds.size(), 14000u);
  EXPECT_EQ(ds.count(Split::Train), 11900u);
  EXPECT_EQ(ds.count(Split::Validation), 2100u);
  expect_stratified(ds);
}

TEST(Dataset, FullScaleHundredFortyThousand) {
  if (std::getenv("TACTILE_FULL_SCALE") == nullptr) GTEST_SKIP() << "set TACTILE_FULL_SCALE=1 for the 140 x 1000 run";
  const auto recs = gesture_corpus(1);
  const auto ds = build_dataset(recs, 1000, 7);
  EXPECT_EQ(ds.size(), 140000u);
  EXPECT_EQ(ds.count(Split::Train), 119000u);
  EXPECT_EQ(ds.count(Split::Validation), 21000u);
  expect_stratified(ds);
}

TEST(Dataset, DeterministicAndIndependentOfWorkerCount) {
  const auto recs = synthesize_corpus(2, 3);
  const auto a = build_dataset(recs, 40, 11, 1);
  const auto b = build_dataset(recs, 40, 11, 1);
  const auto c = build_dataset(recs, 40, 11, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.size(), 30u * 40u);
  const auto d = build_dataset(recs, 40, 12, 1);
  EXPECT_NE(a.split, d.split);
}

TEST(Dataset, SplitsAreDisjointAndStratified) {
  const auto ds = build_dataset(synthesize_corpus(1, 9), 120, 2);
  expect_stratified(ds);
  const auto train = ds.indices(Split::Train), val = ds.indices(Split::Validation);
  EXPECT_EQ(train.size() + val.size(), ds.size());
  std::set<std::size_t> seen(train.begin(), train.end());
  for (auto i : val) EXPECT_FALSE(seen.count(i));
}

TEST(Dataset, EmptyInputIsRejected) { EXPECT_THROW(build_dataset({}, 10, 1), Error); }

TEST(DatasetFile, RoundTrip) {
  testkit::TempDir dir;
  const auto ds = build_dataset(synthesize_corpus(1, 4), 10, 5);
  save_dataset(ds, dir / "a.tds");
  EXPECT_EQ(load_dataset(dir / "a.tds"), ds);
}

TEST(DatasetFile, EmptyDatasetIsAValidFile) {
  testkit::TempDir dir;
  Dataset empty;
  empty.seed = 3;
  save_dataset(empty, dir / "e.tds");
  const auto back = load_dataset(dir / "e.tds");
  EXPECT_EQ(back.size(), 0u);
  EXPECT_EQ(back.seed, 3u);
}

TEST(DatasetFile, DistinctLoadErrors) {
  testkit::TempDir dir;
  const auto ds = build_dataset(synthesize_corpus(1, 4), 4, 5);
  save_dataset(ds, dir / "ok.tds");
  const auto good = testkit::read_bytes(dir / "ok.tds");

  auto kind_of = [&](const std::vector<std::uint8_t>& bytes) {
    testkit::write_bytes(dir / "bad.tds", bytes);
    try {
      load_dataset(dir / "bad.tds");
    } catch (const LoadError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "load succeeded";
    return LoadError::Kind::Io;
  };

  auto truncated = good;
  truncated.resize(good.size() / 2);
  EXPECT_EQ(kind_of(truncated), LoadError::Kind::Truncated);

  auto flipped = good;
  flipped[100] ^= 0x40;
  EXPECT_EQ(kind_of(flipped), LoadError::Kind::Checksum);

  auto version = good;
  version[4] = 9;
  EXPECT_EQ(kind_of(version), LoadError::Kind::VersionMismatch);

  auto magic = good;
  magic[0] = 'X';
  EXPECT_EQ(kind_of(magic), LoadError::Kind::BadMagic);

  EXPECT_EQ(kind_of({}), LoadError::Kind::Truncated);

  try {
    load_dataset(dir / "missing.tds");
    ADD_FAILURE();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.kind(), LoadError::Kind::Io);
  }
}
