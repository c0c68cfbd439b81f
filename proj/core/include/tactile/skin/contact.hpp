#pragma once

#include <span>

#include "tactile/signal/frame.hpp"

namespace tactile::skin {

/// Stress at which the sensor response saturates.
inline constexpr double kFullScaleKpa = 100.0;

/// Physical cell pitch (100 mm x 140 mm aperture over 10 x 10 cells).
inline constexpr double kCellPitchUMm = 10.0;
inline constexpr double kCellPitchVMm = 14.0;

/// A fingertip contact. (u, v) are continuous grid coordinates: u is the column
/// (rightward), v the row (upward); cell (row r, col c) has its center at (c, r).
struct ContactPoint {
  double u = 0.0;
  double v = 0.0;
  double peak_stress_kpa = 0.0;
  double sigma = 1.0;  // Gaussian footprint radius, cells

  friend bool operator==(const ContactPoint&, const ContactPoint&) = default;
};

/// min(stress, 100) / 100. Throws DomainError on negative stress.
double pressure_to_response(double stress_kpa);

/// Sum of Gaussian stress footprints, mapped through pressure_to_response per cell.
TactileFrame contact_footprint(std::span<const ContactPoint> points);

}  // namespace tactile::skin
