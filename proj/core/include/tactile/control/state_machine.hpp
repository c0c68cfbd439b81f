#pragma once

#include <optional>
#include <variant>

#include "tactile/control/pose.hpp"
#include "tactile/gesture.hpp"

namespace tactile::control {

struct VelocityProfile {
  double linear_speed = 0.05;  // m/s
  double angular_speed = 0.2;  // rad/s
};

/// Twist commanded while a motion gesture is active. Throws DomainError for the
/// auxiliary gestures and Invalid, which have no velocity profile.
Twist velocity_profile(GestureClass c, const VelocityProfile& profile = {});

enum class AuxTarget { InitialPose, Home };

struct AuxAction {
  AuxTarget target = AuxTarget::Home;
  friend bool operator==(const AuxAction&, const AuxAction&) = default;
};

/// What a tick emits: nothing, a velocity command, or the start of a recovery move.
using Command = std::variant<std::monostate, Twist, AuxAction>;

struct ControlConfig {
  int dwell_ticks = 20;           // 0.1 s at 200 Hz
  int invalid_release_ticks = 5;  // consecutive Invalid detections that end an active gesture
  VelocityProfile profile;
  double recovery_linear_speed = 0.2;   // m/s
  double recovery_angular_speed = 0.5;  // rad/s
};

struct RecoveryMotion {
  AuxTarget target = AuxTarget::Home;
  Pose start;
  Pose goal;
  int total_ticks = 0;
  int tick = 0;
};

struct SessionState {
  std::optional<GestureClass> active;
  std::optional<GestureClass> candidate;
  int dwell_count = 0;  // consecutive ticks the candidate has been detected
  Pose pose;
  std::optional<Pose> initial_pose;
  std::optional<Pose> home_pose;
  std::optional<RecoveryMotion> recovery;

  bool aux_in_progress() const noexcept { return recovery.has_value(); }
};

struct StepResult {
  SessionState state;
  Command command;
};

/// One control tick.
///  - A candidate becomes active after exactly `dwell_ticks` consecutive detections,
///    preempting any active gesture on that tick.
///  - An active motion gesture emits its twist every tick and the pose is integrated.
///  - Lift-off, or `invalid_release_ticks` consecutive Invalid detections, deactivates.
///  - An auxiliary gesture emits AuxAction once and starts a recovery move; detections
///    are ignored until the move completes.
///  - Invalid never activates.
StepResult step(const SessionState& state, GestureClass detected, bool contact_present, double dt,
                const ControlConfig& config = {});

}  // namespace tactile::control
