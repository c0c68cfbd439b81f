#include "tactile/skin/contact.hpp"

#include <algorithm>
#include <cmath>

#include "tactile/error.hpp"

namespace tactile::skin {

double pressure_to_response(double stress_kpa) {
  if (stress_kpa < 0.0 || std::isnan(stress_kpa)) throw DomainError("stress must be non-negative");
  return std::min(stress_kpa, kFullScaleKpa) / kFullScaleKpa;
}

TactileFrame contact_footprint(std::span<const ContactPoint> points) {
  TactileFrame frame;
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      double stress = 0.0;
      for (const auto& p : points) {
        const double du = c - p.u;
        const double dv = r - p.v;
        stress += p.peak_stress_kpa * std::exp(-(du * du + dv * dv) / (2.0 * p.sigma * p.sigma));
      }
      frame.at(r, c) = pressure_to_response(stress);
    }
  }
  return frame;
}

}  // namespace tactile::skin
