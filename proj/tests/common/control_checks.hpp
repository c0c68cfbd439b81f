#pragma once

#include <optional>
#include <random>
#include <string>

#include "tactile/control/state_machine.hpp"

namespace tactile::testkit {

struct FuzzReport {
  long streams = 0;
  long ticks = 0;
  long activations = 0;
  long recoveries = 0;
  long violations = 0;
  std::string first_violation;
};

// Random detection streams built from runs of one class with occasional lift-offs,
// checked tick by tick against an independent dwell counter.
inline FuzzReport fuzz_state_machine(long streams, std::uint64_t seed) {
  using namespace control;
  constexpr double dt = 1.0 / 200.0;
  const ControlConfig cfg;
  std::mt19937_64 rng(seed);
  FuzzReport rep;
  auto violate = [&](const std::string& what) {
    if (rep.violations++ == 0) rep.first_violation = "stream " + std::to_string(rep.streams) + ": " + what;
  };

  for (; rep.streams < streams; ++rep.streams) {
    SessionState s;
    s.initial_pose = Pose{Eigen::Vector3d(0.4, 0.0, 0.3), Eigen::Quaterniond::Identity()};
    s.home_pose = Pose{Eigen::Vector3d(0.3, 0.0, 0.5), Eigen::Quaterniond::Identity()};
    s.pose = *s.initial_pose;
    int run = 0;
    std::optional<GestureClass> last;
    const int segments = 2 + static_cast<int>(rng() % 8);
    for (int seg = 0; seg < segments; ++seg) {
      const auto cls = kAllClasses[rng() % kAllClasses.size()];
      const bool contact = rng() % 6 != 0;
      const int len = 1 + static_cast<int>(rng() % 45);
      for (int i = 0; i < len; ++i, ++rep.ticks) {
        const SessionState before = s;
        const auto [next, cmd] = step(s, cls, contact, dt, cfg);
        s = next;

        if (before.recovery || !contact) {
          run = 0;
          last.reset();
        } else {
          run = (last == cls) ? run + 1 : 1;
          last = cls;
        }

        const bool twist = std::holds_alternative<Twist>(cmd);
        if (s.dwell_count < 0) violate("negative dwell count");
        if (s.active && !is_motion(*s.active)) violate("non-motion class active");
        if (before.recovery && !std::holds_alternative<std::monostate>(cmd)) violate("emitted during recovery");
        if (!contact && !std::holds_alternative<std::monostate>(cmd)) violate("emitted without contact");
        if (twist) {
          if (!s.active) {
            violate("twist without an active gesture");
          } else if (!(std::get<Twist>(cmd) == velocity_profile(*s.active, cfg.profile))) {
            violate("twist is not the active gesture's profile");
          }
          if (!(s.pose == integrate_pose(before.pose, std::get<Twist>(cmd), dt))) violate("pose not integrated");
        } else if (!s.recovery && !before.recovery && !(s.pose == before.pose)) {
          violate("pose moved without a twist");
        }
        if (s.active && s.active != before.active) {
          ++rep.activations;
          if (s.active != cls) violate("activated a class that was not detected");
          if (run != cfg.dwell_ticks) violate("activation after " + std::to_string(run) + " ticks");
        }
        if (std::holds_alternative<AuxAction>(cmd)) {
          ++rep.recoveries;
          if (!is_auxiliary(cls) || run != cfg.dwell_ticks || s.active) violate("bad auxiliary trigger");
        }
        if (cls == GestureClass::Invalid && (twist || s.active == GestureClass::Invalid)) {
          if (!before.active) violate("Invalid acted");
        }
        if (before.active && cls == GestureClass::Invalid && run >= cfg.invalid_release_ticks && s.active)
          violate("sustained Invalid did not release");
        if (std::abs(s.pose.orientation.norm() - 1.0) > 1e-9) violate("orientation not unit");
      }
    }
  }
  return rep;
}

}  // namespace tactile::testkit
