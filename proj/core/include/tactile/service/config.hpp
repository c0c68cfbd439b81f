#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tactile/control/state_machine.hpp"

namespace tactile::service {

enum class InputSource { Simulator, Capture, Live };

struct SessionConfig {
  InputSource source = InputSource::Capture;
  std::filesystem::path capture;  // Capture source
  std::string scenario;           // Simulator source, see parse_scenario
  std::uint64_t scenario_seed = 1;
  std::filesystem::path weights;
  double frame_rate_hz = 200.0;       // internal tick rate
  std::uint32_t input_rate_hz = 200;  // rate of incoming frames before resampling
  double contact_threshold = 0.05;    // filtered peak above the frame median
  control::ControlConfig control;
  control::Pose initial_pose;
  control::Pose home_pose;

  /// Throws ConfigError.
  void validate() const;
  double dt() const noexcept { return 1.0 / frame_rate_hz; }
};

/// Defaults: initial pose (0.4, 0, 0.3), home pose (0.3, 0, 0.5), both with identity orientation.
SessionConfig default_config();

/// Reads a JSON config; unspecified fields keep their defaults. Throws ConfigError.
SessionConfig load_config(const std::filesystem::path& path);

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "TACTILE_CONFIG";

/// `explicit_path` if given, else $TACTILE_CONFIG if set, else default_config().
SessionConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace tactile::service
