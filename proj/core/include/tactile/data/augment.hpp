#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tactile/data/recording.hpp"

namespace tactile::data {

inline constexpr int kWindowFrames = 30;
inline constexpr int kWindowValues = kWindowFrames * kChannels;

inline constexpr int kSliceMin = 10;
inline constexpr int kSliceMax = 30;
inline constexpr std::size_t kMinCoreFrames = 5;

/// 30 consecutive frames, time-major: value(t, cell).
struct GestureWindow {
  std::array<float, kWindowValues> values{};

  float at(int t, int cell) const { return values[static_cast<std::size_t>(t * kChannels + cell)]; }
  float& at(int t, int cell) { return values[static_cast<std::size_t>(t * kChannels + cell)]; }
  friend bool operator==(const GestureWindow&, const GestureWindow&) = default;
};

struct Sample {
  GestureWindow window;
  GestureClass label = GestureClass::Invalid;
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Where a slice of the recording landed in an augmented window.
struct SlicePlacement {
  std::size_t source_begin = 0;  // first recording frame of the slice
  int length = 0;                // frames
  int offset = 0;                // first window frame covered by the slice
  std::uint64_t canvas_seed = 0;
};

/// Background canvas: Gaussian noise at the simulator's default level, passed
/// through the same moving-average filter as real recordings.
GestureWindow noise_canvas(std::uint64_t seed);

/// canvas + slice (additive), clamped to the normalized range.
Sample compose_sample(const Recording& rec, const SlicePlacement& placement);

struct AugmentedSample {
  Sample sample;
  SlicePlacement placement;
};

/// n windows, each a random-length slice of the core gesture overlaid at a random
/// offset on a fresh noise canvas. Throws AugmentationError if n == 0 or the core
/// span is shorter than kMinCoreFrames.
std::vector<AugmentedSample> augment_recording_detailed(const Recording& rec, std::size_t n, std::uint64_t seed);
std::vector<Sample> augment_recording(const Recording& rec, std::size_t n, std::uint64_t seed);

}  // namespace tactile::data
