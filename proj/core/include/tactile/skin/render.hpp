#pragma once

#include <cstdint>
#include <vector>

#include "tactile/signal/frame.hpp"
#include "tactile/skin/script.hpp"

namespace tactile::skin {

struct NoiseModel {
  double gaussian_sigma = 0.02;  // normalized units
  double drift_rate = 0.01;      // normalized units per second, common to all channels
  std::uint64_t rng_seed = 0;

  static NoiseModel none() { return {0.0, 0.0, 0}; }
};

inline constexpr double kBaselineCounts = 500.0;
inline constexpr double kCountsPerUnit = 1000.0;

struct RenderOptions {
  double fps = kFrameRateHz;
  std::uint32_t first_seq = 0;
  /// Stream time of the first frame; drift is a function of stream time.
  std::uint64_t start_time_us = 0;
};

/// Samples the script every 1/fps, adds noise and drift, and converts to raw counts.
/// Produces round(duration_ms * fps / 1000) frames. Deterministic in the seeds.
std::vector<RawFrame> render(const GestureScript& script, const NoiseModel& noise,
                             const RenderOptions& options = {});

/// One stretch of a composed stream.
struct Segment {
  GestureScript script;
  std::uint64_t noise_seed = 0;
};

/// Renders segments back to back with continuous seq numbers, time base and drift.
std::vector<RawFrame> render_sequence(const std::vector<Segment>& segments, const NoiseModel& noise,
                                      double fps = kFrameRateHz);

}  // namespace tactile::skin
