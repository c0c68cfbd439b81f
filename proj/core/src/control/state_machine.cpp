#include "tactile/control/state_machine.hpp"

#include <string>

#include "tactile/error.hpp"

namespace tactile::control {

Twist velocity_profile(GestureClass c, const VelocityProfile& profile) {
  Twist t;
  const double v = profile.linear_speed;
  const double w = profile.angular_speed;
  switch (c) {
    case GestureClass::TranslateXPos: t.linear.x() = v; break;
    case GestureClass::TranslateXNeg: t.linear.x() = -v; break;
    case GestureClass::TranslateYPos: t.linear.y() = v; break;
    case GestureClass::TranslateYNeg: t.linear.y() = -v; break;
    case GestureClass::TranslateZPos: t.linear.z() = v; break;
    case GestureClass::TranslateZNeg: t.linear.z() = -v; break;
    case GestureClass::RotateXPos: t.angular.x() = w; break;
    case GestureClass::RotateXNeg: t.angular.x() = -w; break;
    case GestureClass::RotateYPos: t.angular.y() = w; break;
    case GestureClass::RotateYNeg: t.angular.y() = -w; break;
    case GestureClass::RotateZPos: t.angular.z() = w; break;
    case GestureClass::RotateZNeg: t.angular.z() = -w; break;
    case GestureClass::AuxInitPose:
    case GestureClass::AuxHome:
    case GestureClass::Invalid:
      throw DomainError("no velocity profile for " + std::string(to_string(c)));
  }
  return t;
}

StepResult step(const SessionState& state, GestureClass detected, bool contact_present, double dt,
                const ControlConfig& config) {
  StepResult r{state, std::monostate{}};
  SessionState& s = r.state;

  if (s.recovery) {
    auto& rec = *s.recovery;
    ++rec.tick;
    s.pose = interpolate_pose(rec.start, rec.goal, rec.tick, rec.total_ticks);
    if (rec.tick >= rec.total_ticks) s.recovery.reset();
    s.candidate.reset();
    s.dwell_count = 0;
    return r;
  }

  if (!contact_present) {
    s.active.reset();
    s.candidate.reset();
    s.dwell_count = 0;
    return r;
  }

  if (s.candidate == detected) {
    ++s.dwell_count;
  } else {
    s.candidate = detected;
    s.dwell_count = 1;
  }

  if (detected == GestureClass::Invalid) {
    if (s.active && s.dwell_count >= config.invalid_release_ticks) s.active.reset();
  } else if (s.dwell_count == config.dwell_ticks && s.active != detected) {
    if (is_auxiliary(detected)) {
      const AuxTarget target = detected == GestureClass::AuxHome ? AuxTarget::Home : AuxTarget::InitialPose;
      const auto& goal = target == AuxTarget::Home ? s.home_pose : s.initial_pose;
      s.active.reset();
      if (goal) {
        const int ticks =
            recovery_ticks(s.pose, *goal, config.recovery_linear_speed, config.recovery_angular_speed, dt);
        if (ticks > 0) s.recovery = RecoveryMotion{target, s.pose, *goal, ticks, 0};
        r.command = AuxAction{target};
      }
      return r;
    }
    s.active = detected;
  }

  if (s.active && is_motion(*s.active)) {
    const Twist twist = velocity_profile(*s.active, config.profile);
    s.pose = integrate_pose(s.pose, twist, dt);
    r.command = twist;
  }
  return r;
}

}  // namespace tactile::control
