#include "tactile/control/pose.hpp"

#include <algorithm>
#include <cmath>

#include "tactile/error.hpp"

namespace tactile::control {

Pose integrate_pose(const Pose& pose, const Twist& twist, double dt) {
  Pose out;
  out.position = pose.position + pose.orientation * (twist.linear * dt);
  const Eigen::Vector3d rotation = twist.angular * dt;
  const double angle = rotation.norm();
  Eigen::Quaterniond delta = Eigen::Quaterniond::Identity();
  if (angle > 0.0) delta = Eigen::Quaterniond(Eigen::AngleAxisd(angle, rotation / angle));
  out.orientation = (pose.orientation * delta).normalized();
  return out;
}

Pose interpolate_pose(const Pose& from, const Pose& to, int k, int n) {
  if (n <= 0 || k >= n) return to;
  if (k <= 0) return from;
  const double s = static_cast<double>(k) / n;
  Pose out;
  out.position = from.position + (to.position - from.position) * s;
  out.orientation = from.orientation.slerp(s, to.orientation).normalized();
  return out;
}

int recovery_ticks(const Pose& from, const Pose& to, double linear_speed, double angular_speed, double dt) {
  const double distance = (to.position - from.position).norm();
  const double angle = from.orientation.angularDistance(to.orientation);
  const double seconds = std::max(distance / linear_speed, angle / angular_speed);
  // Tolerance keeps exact multiples of dt (0.5 s / 5 ms = 100) from rounding up.
  return static_cast<int>(std::ceil(seconds / dt - 1e-9));
}

std::vector<Pose> aux_recover(const Pose& pose, const std::optional<Pose>& target, double linear_speed,
                              double angular_speed, double dt) {
  if (!target) throw ConfigError("recovery target pose is not configured");
  if (!(linear_speed > 0.0) || !(angular_speed > 0.0) || !(dt > 0.0)) {
    throw ConfigError("recovery speeds and dt must be positive");
  }
  const int n = recovery_ticks(pose, *target, linear_speed, angular_speed, dt);
  std::vector<Pose> path;
  path.reserve(static_cast<std::size_t>(std::max(0, n)));
  for (int k = 1; k <= n; ++k) path.push_back(interpolate_pose(pose, *target, k, n));
  return path;
}

}  // namespace tactile::control
