#include "tactile/service/scenario.hpp"

#include <charconv>
#include <string>

#include "tactile/data/recording.hpp"
#include "tactile/error.hpp"
#include "tactile/skin/script.hpp"

namespace tactile::service {

std::vector<ScenarioStep> parse_scenario(std::string_view text) {
  std::vector<ScenarioStep> steps;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError("scenario step needs name:ms, got '" + std::string(item) + "'");
    const auto name = item.substr(0, colon);
    const auto ms = item.substr(colon + 1);
    ScenarioStep step;
    const auto [ptr, ec] = std::from_chars(ms.data(), ms.data() + ms.size(), step.duration_ms);
    if (ec != std::errc{} || ptr != ms.data() + ms.size() || !(step.duration_ms > 0.0)) {
      throw ConfigError("bad scenario duration '" + std::string(ms) + "'");
    }
    if (name != "idle") {
      step.gesture = parse_gesture(name);
      if (!step.gesture) throw ConfigError("unknown gesture '" + std::string(name) + "'");
    }
    steps.push_back(step);
  }
  if (steps.empty()) throw ConfigError("empty scenario");
  return steps;
}

std::vector<RawFrame> render_scenario(const std::vector<ScenarioStep>& steps, std::uint64_t seed,
                                      const skin::NoiseModel& noise) {
  std::vector<skin::Segment> segments;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const std::uint64_t step_seed = data::derive_seed(seed, i);
    skin::GestureScript script;
    if (!s.gesture) {
      script = skin::idle_script(s.duration_ms);
    } else if (*s.gesture == GestureClass::Invalid) {
      script = skin::invalid_script(step_seed);
      script.duration_ms = s.duration_ms;
    } else {
      skin::ScriptRanges ranges;
      ranges.duration_ms_min = ranges.duration_ms_max = s.duration_ms;
      script = skin::script_for(*s.gesture, step_seed, ranges);
    }
    segments.push_back({std::move(script), data::derive_seed(step_seed, 1)});
  }
  return skin::render_sequence(segments, noise);
}

}  // namespace tactile::service
