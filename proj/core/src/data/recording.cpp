#include "tactile/data/recording.hpp"

#include <algorithm>
#include <cmath>

#include "tactile/error.hpp"
#include "tactile/signal/filter.hpp"
#include "tactile/skin/script.hpp"

namespace tactile::data {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Recording process_capture(std::span<const RawFrame> raw, GestureClass label, FrameSpan contact) {
  const Baseline base = calibrate(raw);
  const auto cal = static_cast<std::size_t>(kCalibrationFrames);
  if (contact.begin < cal || contact.end > raw.size() || contact.end < contact.begin) {
    throw ConfigError("contact span must lie after the calibration segment");
  }

  Recording rec;
  rec.label = label;
  rec.frames.reserve(raw.size() - cal);
  MovingAverage filter;
  for (std::size_t i = cal; i < raw.size(); ++i) {
    rec.frames.push_back(filter.push(subtract_baseline(raw[i], base, skin::kCountsPerUnit)));
  }
  rec.core.begin = contact.begin - cal;
  rec.core.end = std::min(rec.frames.size(), contact.end - cal + kFilterWindow - 1);
  return rec;
}

RawRecording synthesize_raw(GestureClass label, std::uint64_t seed, const skin::NoiseModel& noise,
                            const RecordingLayout& layout) {
  const auto frames_for = [](double ms) { return static_cast<std::size_t>(std::llround(ms * kFrameRateHz / 1000.0)); };
  const skin::GestureScript script =
      label == GestureClass::Invalid ? skin::invalid_script(derive_seed(seed, 1)) : skin::script_for(label, derive_seed(seed, 1));

  std::vector<skin::Segment> segments;
  segments.push_back({skin::idle_script(layout.calibration_ms + layout.pre_roll_ms), derive_seed(seed, 2)});
  segments.push_back({script, derive_seed(seed, 3)});
  segments.push_back({skin::idle_script(layout.post_roll_ms), derive_seed(seed, 4)});

  RawRecording out;
  out.label = label;
  out.frames = skin::render_sequence(segments, noise);
  out.contact.begin = frames_for(layout.calibration_ms + layout.pre_roll_ms);
  out.contact.end = out.contact.begin + frames_for(script.duration_ms);
  return out;
}

Recording synthesize_recording(GestureClass label, std::uint64_t seed, const skin::NoiseModel& noise,
                               const RecordingLayout& layout) {
  const RawRecording raw = synthesize_raw(label, seed, noise, layout);
  return process_capture(raw.frames, label, raw.contact);
}

std::uint64_t recording_seed(std::uint64_t seed, GestureClass c, int i) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(index_of(c)) * 1000003ULL + static_cast<std::uint64_t>(i));
}

std::vector<Recording> synthesize_corpus(int per_class, std::uint64_t seed, const skin::NoiseModel& noise) {
  std::vector<Recording> out;
  out.reserve(static_cast<std::size_t>(per_class) * kNumClasses);
  for (GestureClass c : kAllClasses) {
    for (int i = 0; i < per_class; ++i) {
      out.push_back(synthesize_recording(c, recording_seed(seed, c, i), noise));
    }
  }
  return out;
}

}  // namespace tactile::data
