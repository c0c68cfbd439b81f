#include "tactile/skin/script.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "tactile/error.hpp"

namespace tactile::skin {

namespace {

using std::numbers::pi;

struct Point2 {
  double u = 0.0;
  double v = 0.0;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

/// Pressure envelope: short ramps at touch-down and lift-off, never fully zero while touching.
double envelope(double t_ms, double duration_ms) {
  const double ramp = std::min(25.0, duration_ms / 4.0);
  if (ramp <= 0.0) return 1.0;
  const double e = std::min({1.0, t_ms / ramp, (duration_ms - t_ms) / ramp});
  return std::max(0.1, e);
}

using PathFn = std::function<Point2(double)>;        // fraction of duration -> position
using PressureFn = std::function<double(double)>;    // fraction of duration -> gain

FingerTrack make_track(double duration_ms, double peak_kpa, double sigma, const PathFn& path,
                       const PressureFn& gain = [](double) { return 1.0; }) {
  FingerTrack track;
  const int steps = std::max(1, static_cast<int>(std::ceil(duration_ms / kTrackStepMs)));
  track.points.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = std::min(duration_ms, k * kTrackStepMs);
    const double s = duration_ms > 0.0 ? t / duration_ms : 0.0;
    const Point2 p = path(s);
    const double stress = peak_kpa * gain(s) * envelope(t, duration_ms);
    track.points.push_back({t, ContactPoint{p.u, p.v, stress, sigma}});
  }
  return track;
}

Point2 lerp(Point2 a, Point2 b, double s) { return {a.u + (b.u - a.u) * s, a.v + (b.v - a.v) * s}; }

struct Common {
  double peak;
  double sigma;
  double length;
  double duration;
  double spacing;
};

Common draw_common(Sampler& rng, const ScriptRanges& r) {
  Common c;
  c.peak = rng.uniform(r.peak_kpa_min, r.peak_kpa_max);
  c.sigma = rng.uniform(r.sigma_min, r.sigma_max);
  c.length = rng.uniform(r.length_min, r.length_max);
  c.duration = rng.uniform(r.duration_ms_min, r.duration_ms_max);
  c.spacing = rng.uniform(r.spacing_min, r.spacing_max);
  return c;
}

constexpr double kGridMax = kGridCols - 1;  // 9.0
constexpr double kEdge = 0.5;

/// Straight swipe of `fingers` contacts offset perpendicular to the motion.
/// axis_vertical: motion along v; sign: +1 towards increasing coordinate.
GestureScript parallel_swipe(GestureClass label, Sampler& rng, const Common& c, int fingers,
                             bool axis_vertical, int sign) {
  const double spread = c.spacing * (fingers - 1);
  const double along0 = rng.uniform(kEdge, kGridMax - kEdge - c.length);
  const double across0 = rng.uniform(kEdge + spread / 2.0 + 1.0, kGridMax - kEdge - spread / 2.0 - 1.0);
  const double from = sign > 0 ? along0 : along0 + c.length;
  const double to = sign > 0 ? along0 + c.length : along0;

  GestureScript script;
  script.label = label;
  script.duration_ms = c.duration;
  for (int f = 0; f < fingers; ++f) {
    const double across = across0 + (f - (fingers - 1) / 2.0) * c.spacing;
    const double peak = c.peak * rng.uniform(0.85, 1.0);
    script.fingers.push_back(make_track(c.duration, peak, c.sigma, [=](double s) {
      const double along = from + (to - from) * s;
      return axis_vertical ? Point2{across, along} : Point2{along, across};
    }));
  }
  return script;
}

GestureScript push(Sampler& rng, const Common& c) {
  const Point2 at{rng.uniform(2.0, 7.0), rng.uniform(2.0, 7.0)};
  GestureScript script;
  script.label = GestureClass::TranslateXNeg;
  script.duration_ms = c.duration;
  script.fingers.push_back(make_track(
      c.duration, c.peak, c.sigma, [=](double) { return at; }, [](double s) { return 0.3 + 0.7 * s; }));
  return script;
}

GestureScript two_finger_pinch_in(Sampler& rng, const Common& c) {
  const double start_gap = std::min(7.0, c.spacing + c.length / 2.0);
  const double end_gap = start_gap * 0.25;
  const double angle = rng.uniform(0.0, pi);
  const Point2 center{rng.uniform(3.5, 5.5), rng.uniform(3.5, 5.5)};
  const Point2 dir{std::cos(angle), std::sin(angle)};

  GestureScript script;
  script.label = GestureClass::TranslateXPos;
  script.duration_ms = c.duration;
  for (int side : {-1, 1}) {
    const double peak = c.peak * rng.uniform(0.85, 1.0);
    script.fingers.push_back(make_track(c.duration, peak, c.sigma, [=](double s) {
      const double half = (start_gap + (end_gap - start_gap) * s) / 2.0;
      return Point2{center.u + side * half * dir.u, center.v + side * half * dir.v};
    }));
  }
  return script;
}

/// Two contacts diametrically opposite on a circle, sweeping clockwise (viewed facing the skin)
/// when `clockwise`.
GestureScript circular_stroke(GestureClass label, Sampler& rng, const Common& c, bool clockwise) {
  const double radius = c.spacing;
  const Point2 center{rng.uniform(kEdge + radius, kGridMax - kEdge - radius),
                      rng.uniform(kEdge + radius, kGridMax - kEdge - radius)};
  const double start = rng.uniform(0.0, 2.0 * pi);
  const double sweep = rng.uniform(0.75 * pi, 1.25 * pi) * (clockwise ? -1.0 : 1.0);

  GestureScript script;
  script.label = label;
  script.duration_ms = c.duration;
  for (double phase : {0.0, pi}) {
    const double peak = c.peak * rng.uniform(0.85, 1.0);
    script.fingers.push_back(make_track(c.duration, peak, c.sigma, [=](double s) {
      const double a = start + phase + sweep * s;
      return Point2{center.u + radius * std::cos(a), center.v + radius * std::sin(a)};
    }));
  }
  return script;
}

GestureScript five_finger_pinch(GestureClass label, Sampler& rng, const Common& c, bool inward) {
  const Point2 center{rng.uniform(4.0, 5.0), rng.uniform(4.0, 5.0)};
  const double wide = rng.uniform(3.0, 3.9);
  const double narrow = rng.uniform(1.0, 1.5);
  const double r0 = inward ? wide : narrow;
  const double r1 = inward ? narrow : wide;
  const double base = rng.uniform(0.0, 2.0 * pi);

  GestureScript script;
  script.label = label;
  script.duration_ms = c.duration;
  for (int k = 0; k < 5; ++k) {
    const double a = base + 2.0 * pi * k / 5.0 + rng.uniform(-0.2, 0.2);
    const double scale = rng.uniform(0.9, 1.0);
    const double peak = c.peak * rng.uniform(0.8, 1.0);
    script.fingers.push_back(make_track(c.duration, peak, c.sigma, [=](double s) {
      const double r = (r0 + (r1 - r0) * s) * scale;
      return Point2{center.u + r * std::cos(a), center.v + r * std::sin(a)};
    }));
  }
  return script;
}

}  // namespace

std::optional<ContactPoint> FingerTrack::at(double t_ms) const {
  if (points.empty() || t_ms < points.front().t_ms || t_ms > points.back().t_ms) return std::nullopt;
  auto hi = std::lower_bound(points.begin(), points.end(), t_ms,
                             [](const TrackPoint& p, double t) { return p.t_ms < t; });
  if (hi == points.begin()) return hi->contact;
  auto lo = std::prev(hi);
  const double span = hi->t_ms - lo->t_ms;
  const double s = span > 0.0 ? (t_ms - lo->t_ms) / span : 0.0;
  const auto& a = lo->contact;
  const auto& b = hi->contact;
  return ContactPoint{a.u + (b.u - a.u) * s, a.v + (b.v - a.v) * s,
                      a.peak_stress_kpa + (b.peak_stress_kpa - a.peak_stress_kpa) * s,
                      a.sigma + (b.sigma - a.sigma) * s};
}

GestureScript script_for(GestureClass label, std::uint64_t seed, const ScriptRanges& ranges) {
  Sampler rng(seed);
  const Common c = draw_common(rng, ranges);
  switch (label) {
    case GestureClass::TranslateXPos: return two_finger_pinch_in(rng, c);
    case GestureClass::TranslateXNeg: return push(rng, c);
    case GestureClass::TranslateYPos: return parallel_swipe(label, rng, c, 1, false, +1);
    case GestureClass::TranslateYNeg: return parallel_swipe(label, rng, c, 1, false, -1);
    case GestureClass::TranslateZPos: return parallel_swipe(label, rng, c, 1, true, +1);
    case GestureClass::TranslateZNeg: return parallel_swipe(label, rng, c, 1, true, -1);
    case GestureClass::RotateXPos: return circular_stroke(label, rng, c, true);
    case GestureClass::RotateXNeg: return circular_stroke(label, rng, c, false);
    case GestureClass::RotateYPos: return parallel_swipe(label, rng, c, 2, true, +1);
    case GestureClass::RotateYNeg: return parallel_swipe(label, rng, c, 2, true, -1);
    case GestureClass::RotateZPos: return parallel_swipe(label, rng, c, 2, false, +1);
    case GestureClass::RotateZNeg: return parallel_swipe(label, rng, c, 2, false, -1);
    case GestureClass::AuxInitPose: return five_finger_pinch(label, rng, c, true);
    case GestureClass::AuxHome: return five_finger_pinch(label, rng, c, false);
    case GestureClass::Invalid: break;
  }
  throw DomainError("script_for: use invalid_script for the Invalid class");
}

InvalidKind invalid_kind_for(std::uint64_t seed) {
  Sampler rng(seed ^ 0x9e3779b97f4a7c15ULL);
  return static_cast<InvalidKind>(rng.integer(0, 4));
}

GestureScript invalid_script(std::uint64_t seed) { return invalid_script(seed, invalid_kind_for(seed)); }

GestureScript invalid_script(std::uint64_t seed, InvalidKind kind) {
  Sampler rng(seed);
  const ScriptRanges ranges;
  const Common c = draw_common(rng, ranges);

  GestureScript script;
  script.label = GestureClass::Invalid;
  switch (kind) {
    case InvalidKind::NoContact:
      script.duration_ms = c.duration;
      break;
    case InvalidKind::Tap: {
      script.duration_ms = rng.uniform(30.0, 90.0);
      const Point2 at{rng.uniform(1.5, 7.5), rng.uniform(1.5, 7.5)};
      script.fingers.push_back(make_track(script.duration_ms, c.peak, c.sigma, [=](double) { return at; }));
      break;
    }
    case InvalidKind::ThreeFingerSwipe: {
      const bool vertical = rng.coin();
      const int sign = rng.coin() ? 1 : -1;
      Common narrow = c;
      narrow.spacing = 2.0;
      narrow.length = std::min(c.length, 6.0);
      script = parallel_swipe(GestureClass::Invalid, rng, narrow, 3, vertical, sign);
      break;
    }
    case InvalidKind::Scribble: {
      script.duration_ms = rng.uniform(300.0, 600.0);
      // Waypoints whose consecutive legs turn by more than 90 degrees.
      std::vector<Point2> way{{rng.uniform(1.0, 8.0), rng.uniform(1.0, 8.0)}};
      const int legs = rng.integer(4, 6);
      while (static_cast<int>(way.size()) <= legs) {
        const Point2 next{rng.uniform(1.0, 8.0), rng.uniform(1.0, 8.0)};
        const Point2& last = way.back();
        const double du = next.u - last.u, dv = next.v - last.v;
        if (std::hypot(du, dv) < 1.5) continue;
        if (way.size() >= 2) {
          const Point2& prev = way[way.size() - 2];
          if (du * (last.u - prev.u) + dv * (last.v - prev.v) >= 0.0) continue;
        }
        way.push_back(next);
      }
      script.fingers.push_back(make_track(script.duration_ms, c.peak, c.sigma, [way](double s) {
        const double pos = s * static_cast<double>(way.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), way.size() - 2);
        return lerp(way[i], way[i + 1], pos - static_cast<double>(i));
      }));
      break;
    }
    case InvalidKind::StaticRest: {
      script.duration_ms = c.duration;
      const int n = rng.integer(2, 4);
      std::vector<Point2> spots;
      while (static_cast<int>(spots.size()) < n) {
        const Point2 p{rng.uniform(1.0, 8.0), rng.uniform(1.0, 8.0)};
        const bool clear = std::all_of(spots.begin(), spots.end(),
                                       [&](const Point2& q) { return std::hypot(p.u - q.u, p.v - q.v) >= 2.5; });
        if (clear) spots.push_back(p);
      }
      for (const auto& p : spots) {
        const double peak = c.peak * rng.uniform(0.7, 1.0);
        script.fingers.push_back(make_track(script.duration_ms, peak, c.sigma, [p](double) { return p; }));
      }
      break;
    }
  }
  return script;
}

GestureScript idle_script(double duration_ms) {
  GestureScript s;
  s.label = GestureClass::Invalid;
  s.duration_ms = duration_ms;
  return s;
}

std::vector<ContactPoint> contacts_at(const GestureScript& script, double t_ms) {
  std::vector<ContactPoint> out;
  for (const auto& finger : script.fingers) {
    if (auto p = finger.at(t_ms)) out.push_back(*p);
  }
  return out;
}

}  // namespace tactile::skin
