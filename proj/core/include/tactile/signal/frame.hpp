#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace tactile {

inline constexpr int kGridRows = 10;
inline constexpr int kGridCols = 10;
inline constexpr int kChannels = kGridRows * kGridCols;

/// Readout rate of the skin.
inline constexpr double kFrameRateHz = 200.0;
inline constexpr std::int64_t kFramePeriodUs = 5000;

/// Frames averaged by a standard calibration (500 ms at 200 Hz).
inline constexpr int kCalibrationFrames = 100;

/// Causal moving-average length (100 ms at 200 Hz).
inline constexpr int kFilterWindow = 20;

inline constexpr double kClampLow = -0.25;
inline constexpr double kClampHigh = 1.25;

/// Row-major index of a grid cell. Row 0 is the bottom of the skin.
constexpr int cell_index(int row, int col) noexcept { return row * kGridCols + col; }

/// One scan of the sensing grid in raw sensor counts.
struct RawFrame {
  std::array<std::uint16_t, kChannels> counts{};
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;

  std::uint16_t at(int row, int col) const { return counts[cell_index(row, col)]; }
  friend bool operator==(const RawFrame&, const RawFrame&) = default;
};

/// Per-channel rest level established during static calibration.
struct Baseline {
  std::array<double, kChannels> mean_counts{};
  int n_frames = 0;
};

/// Baseline-subtracted, normalized capacitance change. 1.0 is the saturating response at 100 kPa.
struct TactileFrame {
  std::array<double, kChannels> values{};
  std::uint64_t timestamp_us = 0;

  double at(int row, int col) const { return values[cell_index(row, col)]; }
  double& at(int row, int col) { return values[cell_index(row, col)]; }
  double max_value() const;

  friend bool operator==(const TactileFrame&, const TactileFrame&) = default;
};

/// Per-channel mean of the first kCalibrationFrames frames.
/// Throws CalibrationError when fewer frames are supplied.
Baseline calibrate(std::span<const RawFrame> frames);

/// (counts - baseline) / scale, clamped to [kClampLow, kClampHigh].
/// Throws DomainError if scale is not positive.
TactileFrame subtract_baseline(const RawFrame& raw, const Baseline& base, double scale);

}  // namespace tactile
