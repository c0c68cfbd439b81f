#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tactile/gesture.hpp"
#include "tactile/signal/frame.hpp"
#include "tactile/skin/render.hpp"

namespace tactile::service {

/// One step of a scripted session. An empty gesture means no contact.
struct ScenarioStep {
  std::optional<GestureClass> gesture;
  double duration_ms = 0.0;
};

/// Parses "idle:500,TranslateZPos:1000,idle:400,...". Throws ConfigError.
std::vector<ScenarioStep> parse_scenario(std::string_view text);

/// Renders the steps back to back at 200 Hz. Gesture steps use the canonical trajectory
/// family stretched to the step duration; Invalid steps use the invalid pattern generator.
std::vector<RawFrame> render_scenario(const std::vector<ScenarioStep>& steps, std::uint64_t seed,
                                      const skin::NoiseModel& noise = {});

}  // namespace tactile::service
