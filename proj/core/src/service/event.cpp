#include "tactile/service/event.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace tactile::service {

namespace {

using nlohmann::ordered_json;

double rounded(double x, double scale) {
  const double r = std::round(x * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

ordered_json vec3(const Eigen::Vector3d& v, double scale) {
  return ordered_json::array({rounded(v.x(), scale), rounded(v.y(), scale), rounded(v.z(), scale)});
}

ordered_json command_json(const control::Command& cmd) {
  if (const auto* t = std::get_if<control::Twist>(&cmd)) {
    ordered_json twist;
    twist["linear"] = vec3(t->linear, 1e9);
    twist["angular"] = vec3(t->angular, 1e9);
    ordered_json j;
    j["twist"] = std::move(twist);
    return j;
  }
  if (const auto* a = std::get_if<control::AuxAction>(&cmd)) {
    ordered_json j;
    j["aux"] = a->target == control::AuxTarget::Home ? "home" : "initial";
    return j;
  }
  return nullptr;
}

}  // namespace

std::string to_record(const StateEvent& e) {
  ordered_json j;
  j["v"] = kEventSchemaVersion;
  j["type"] = "state";
  j["tick"] = e.tick;
  j["t_us"] = e.timestamp_us;
  j["detected"] = std::string(to_string(e.detected));
  auto probs = ordered_json::array();
  for (float p : e.probs) probs.push_back(rounded(p, 1e6));
  j["p"] = std::move(probs);
  j["contact"] = e.contact;
  j["active"] = e.active ? ordered_json(std::string(to_string(*e.active))) : ordered_json(nullptr);
  j["cmd"] = command_json(e.command);
  j["recovering"] = e.recovering;
  const auto& q = e.pose.orientation;
  ordered_json pose;
  pose["p"] = vec3(e.pose.position, 1e9);
  pose["q"] = ordered_json::array({rounded(q.w(), 1e9), rounded(q.x(), 1e9), rounded(q.y(), 1e9), rounded(q.z(), 1e9)});
  j["pose"] = std::move(pose);
  return j.dump();
}

}  // namespace tactile::service
