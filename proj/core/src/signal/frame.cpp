#include "tactile/signal/frame.hpp"

#include <algorithm>
#include <string>

#include "tactile/error.hpp"

namespace tactile {

double TactileFrame::max_value() const { return *std::max_element(values.begin(), values.end()); }

Baseline calibrate(std::span<const RawFrame> frames) {
  if (frames.size() < static_cast<std::size_t>(kCalibrationFrames)) {
    throw CalibrationError("calibration needs " + std::to_string(kCalibrationFrames) +
                           " frames, got " + std::to_string(frames.size()));
  }
  Baseline base;
  std::array<std::uint64_t, kChannels> sums{};
  for (int f = 0; f < kCalibrationFrames; ++f) {
    for (int c = 0; c < kChannels; ++c) sums[c] += frames[f].counts[c];
  }
  for (int c = 0; c < kChannels; ++c) {
    base.mean_counts[c] = static_cast<double>(sums[c]) / kCalibrationFrames;
  }
  base.n_frames = kCalibrationFrames;
  return base;
}

TactileFrame subtract_baseline(const RawFrame& raw, const Baseline& base, double scale) {
  if (!(scale > 0.0)) throw DomainError("baseline scale must be positive");
  TactileFrame out;
  out.timestamp_us = raw.timestamp_us;
  for (int c = 0; c < kChannels; ++c) {
    const double v = (static_cast<double>(raw.counts[c]) - base.mean_counts[c]) / scale;
    out.values[c] = std::clamp(v, kClampLow, kClampHigh);
  }
  return out;
}

}  // namespace tactile
