#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tactile/gesture.hpp"
#include "tactile/signal/frame.hpp"
#include "tactile/skin/render.hpp"

namespace tactile::data {

/// Half-open range [begin, end) of frame indices.
struct FrameSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
  friend bool operator==(const FrameSpan&, const FrameSpan&) = default;
};

/// A processed (calibrated, baseline-subtracted, filtered) gesture recording.
struct Recording {
  GestureClass label = GestureClass::Invalid;
  std::vector<TactileFrame> frames;
  FrameSpan core;  // frames carrying the gesture, including the filter's decay tail
};

/// Runs the tactile-core chain over a raw capture: calibrate on the first
/// kCalibrationFrames frames, subtract the baseline from the remainder, and filter.
/// `contact` is given in raw-frame indices; the returned core span is relative to
/// the processed frames and extended by kFilterWindow - 1 frames of filter decay.
Recording process_capture(std::span<const RawFrame> raw, GestureClass label, FrameSpan contact);

/// Layout of a synthesized recording stream.
struct RecordingLayout {
  double calibration_ms = 500.0;
  double pre_roll_ms = 100.0;
  double post_roll_ms = 150.0;
};

struct RawRecording {
  GestureClass label = GestureClass::Invalid;
  std::vector<RawFrame> frames;
  FrameSpan contact;  // raw-frame indices of the gesture script
};

/// Renders idle calibration + gesture script (or an invalid pattern) + idle tail.
RawRecording synthesize_raw(GestureClass label, std::uint64_t seed, const skin::NoiseModel& noise,
                            const RecordingLayout& layout = {});

Recording synthesize_recording(GestureClass label, std::uint64_t seed, const skin::NoiseModel& noise,
                               const RecordingLayout& layout = {});

/// Seed of recording i of class c in a corpus.
std::uint64_t recording_seed(std::uint64_t seed, GestureClass c, int i) noexcept;

/// `per_class` recordings for each of the 15 classes, seeds derived from `seed`.
std::vector<Recording> synthesize_corpus(int per_class, std::uint64_t seed, const skin::NoiseModel& noise = {});

/// SplitMix64 step; used to derive independent child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace tactile::data
