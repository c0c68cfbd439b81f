#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tactile/gesture.hpp"
#include "tactile/skin/contact.hpp"

namespace tactile::skin {

struct TrackPoint {
  double t_ms = 0.0;
  ContactPoint contact;
};

/// Time-parametrized path of one finger, linearly interpolated between keyframes.
/// The finger touches the skin only within [front().t_ms, back().t_ms].
struct FingerTrack {
  std::vector<TrackPoint> points;

  std::optional<ContactPoint> at(double t_ms) const;
};

struct GestureScript {
  GestureClass label = GestureClass::Invalid;
  std::vector<FingerTrack> fingers;
  double duration_ms = 0.0;
};

/// Sampling ranges for the randomized trajectory families.
struct ScriptRanges {
  double peak_kpa_min = 20.0, peak_kpa_max = 90.0;
  double sigma_min = 0.6, sigma_max = 1.1;
  double length_min = 4.0, length_max = 8.0;  // swipe length, cells
  double duration_ms_min = 200.0, duration_ms_max = 600.0;
  double spacing_min = 2.0, spacing_max = 4.0;  // two-finger spacing, cells
};

/// Keyframe spacing of generated tracks (one per frame at 200 Hz).
inline constexpr double kTrackStepMs = 5.0;

/// Canonical trajectory for a gesture with randomized start, speed, pressure and spacing.
/// Deterministic in `seed`. Throws DomainError for GestureClass::Invalid.
GestureScript script_for(GestureClass label, std::uint64_t seed, const ScriptRanges& ranges = {});

/// Activity patterns that must not trigger an action.
enum class InvalidKind { NoContact, Tap, ThreeFingerSwipe, Scribble, StaticRest };

InvalidKind invalid_kind_for(std::uint64_t seed);
GestureScript invalid_script(std::uint64_t seed);
GestureScript invalid_script(std::uint64_t seed, InvalidKind kind);

/// Script with no fingers, used for idle and calibration stretches.
GestureScript idle_script(double duration_ms);

/// Contacts of every finger at time t.
std::vector<ContactPoint> contacts_at(const GestureScript& script, double t_ms);

}  // namespace tactile::skin
