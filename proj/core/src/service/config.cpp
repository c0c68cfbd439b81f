#include "tactile/service/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>

#include "tactile/error.hpp"

namespace tactile::service {

namespace {

using nlohmann::json;

control::Pose parse_pose(const json& j) {
  control::Pose p;
  const auto pos = j.at("position").get<std::vector<double>>();
  const auto q = j.value("orientation", std::vector<double>{1.0, 0.0, 0.0, 0.0});  // w, x, y, z
  if (pos.size() != 3 || q.size() != 4) throw ConfigError("pose needs position[3] and orientation[4] (w,x,y,z)");
  p.position = {pos[0], pos[1], pos[2]};
  p.orientation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  if (!(p.orientation.norm() > 0.0)) throw ConfigError("pose orientation must be nonzero");
  p.orientation.normalize();
  return p;
}

InputSource parse_source(const std::string& s) {
  if (s == "simulator") return InputSource::Simulator;
  if (s == "capture") return InputSource::Capture;
  if (s == "live") return InputSource::Live;
  throw ConfigError("unknown input source '" + s + "'");
}

}  // namespace

void SessionConfig::validate() const {
  if (!(frame_rate_hz > 0.0) || !std::isfinite(frame_rate_hz)) throw ConfigError("frame rate must be positive");
  if (input_rate_hz == 0) throw ConfigError("input rate must be positive");
  if (control.dwell_ticks < 1) throw ConfigError("dwell_ticks must be at least 1");
  if (control.invalid_release_ticks < 1) throw ConfigError("invalid_release_ticks must be at least 1");
  if (!(control.profile.linear_speed > 0.0) || !(control.profile.angular_speed > 0.0)) {
    throw ConfigError("velocity profile speeds must be positive");
  }
  if (!(control.recovery_linear_speed > 0.0) || !(control.recovery_angular_speed > 0.0)) {
    throw ConfigError("recovery speeds must be positive");
  }
  if (!(contact_threshold > 0.0)) throw ConfigError("contact_threshold must be positive");
}

SessionConfig default_config() {
  SessionConfig c;
  c.initial_pose.position = {0.4, 0.0, 0.3};
  c.home_pose.position = {0.3, 0.0, 0.5};
  return c;
}

SessionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  SessionConfig c = default_config();
  try {
    const json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const auto base = path.parent_path();
    auto rel = [&](const std::string& s) {
      std::filesystem::path p(s);
      return p.is_relative() ? base / p : p;
    };
    if (j.contains("source")) c.source = parse_source(j.at("source").get<std::string>());
    if (j.contains("capture")) c.capture = rel(j.at("capture").get<std::string>());
    if (j.contains("scenario")) c.scenario = j.at("scenario").get<std::string>();
    if (j.contains("scenario_seed")) c.scenario_seed = j.at("scenario_seed").get<std::uint64_t>();
    if (j.contains("weights")) c.weights = rel(j.at("weights").get<std::string>());
    c.frame_rate_hz = j.value("frame_rate_hz", c.frame_rate_hz);
    c.input_rate_hz = j.value("input_rate_hz", c.input_rate_hz);
    c.contact_threshold = j.value("contact_threshold", c.contact_threshold);
    c.control.dwell_ticks = j.value("dwell_ticks", c.control.dwell_ticks);
    c.control.invalid_release_ticks = j.value("invalid_release_ticks", c.control.invalid_release_ticks);
    c.control.profile.linear_speed = j.value("linear_speed", c.control.profile.linear_speed);
    c.control.profile.angular_speed = j.value("angular_speed", c.control.profile.angular_speed);
    c.control.recovery_linear_speed = j.value("recovery_linear_speed", c.control.recovery_linear_speed);
    c.control.recovery_angular_speed = j.value("recovery_angular_speed", c.control.recovery_angular_speed);
    if (j.contains("initial_pose")) c.initial_pose = parse_pose(j.at("initial_pose"));
    if (j.contains("home_pose")) c.home_pose = parse_pose(j.at("home_pose"));
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path.string() + ": " + e.what());
  }
  c.validate();
  return c;
}

SessionConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return load_config(env);
  return default_config();
}

}  // namespace tactile::service
