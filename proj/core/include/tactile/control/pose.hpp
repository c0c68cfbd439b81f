#pragma once

#include <Eigen/Geometry>
#include <optional>
#include <vector>

namespace tactile::control {

/// Velocity command in the end-effector frame.
struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();   // m/s
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();  // rad/s

  static Twist zero() { return {}; }
  bool is_zero() const { return linear.isZero(0.0) && angular.isZero(0.0); }
  friend bool operator==(const Twist& a, const Twist& b) { return a.linear == b.linear && a.angular == b.angular; }
};

/// End-effector pose in the world frame.
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.position == b.position && a.orientation.coeffs() == b.orientation.coeffs();
  }
};

/// Applies an end-effector-frame twist for dt seconds: the linear part is rotated into
/// the world frame, the orientation is right-multiplied by exp(angular * dt), and the
/// quaternion is renormalized.
Pose integrate_pose(const Pose& pose, const Twist& twist, double dt);

/// Pose k of an n-step straight-line / shortest-arc interpolation from `from` to `to`.
/// Step n returns `to` exactly.
Pose interpolate_pose(const Pose& from, const Pose& to, int k, int n);

/// Number of ticks needed to move between poses at the given speeds (0 if already there).
int recovery_ticks(const Pose& from, const Pose& to, double linear_speed, double angular_speed, double dt);

/// Intermediate poses of a recovery move, excluding the start and ending exactly at
/// `target`. Empty when the pose is already at the target. Throws ConfigError when
/// the target is unset or a speed is not positive.
std::vector<Pose> aux_recover(const Pose& pose, const std::optional<Pose>& target, double linear_speed = 0.2,
                              double angular_speed = 0.5, double dt = 1.0 / 200.0);

}  // namespace tactile::control
