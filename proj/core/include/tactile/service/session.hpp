#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tactile/control/state_machine.hpp"
#include "tactile/data/augment.hpp"
#include "tactile/model/classifier.hpp"
#include "tactile/service/config.hpp"
#include "tactile/service/event.hpp"
#include "tactile/signal/filter.hpp"
#include "tactile/skin/wire.hpp"

namespace tactile::service {

/// Peak of the filtered frame above its median. Common-mode drift moves both.
bool contact_present(const TactileFrame& frame, double threshold);

/// Per-frame pipeline: calibrate -> subtract -> moving average -> trailing window ->
/// classify -> state-machine step. Single-threaded; one event per post-calibration frame.
class Session {
 public:
  Session(model::Model model, SessionConfig config);

  /// Returns nothing while the first kCalibrationFrames frames are collected.
  std::optional<StateEvent> push(const RawFrame& frame);

  /// Safety stop: deactivates, cancels any recovery and returns a zero-twist event
  /// for the next tick.
  StateEvent halt();

  /// Changes dwell, profiles and poses in place; the session state is kept.
  void reconfigure(const SessionConfig& config);

  bool calibrated() const noexcept { return baseline_.has_value(); }
  std::uint64_t ticks() const noexcept { return tick_; }
  std::uint64_t frames() const noexcept { return frames_; }
  /// Frames missing according to sequence-number gaps.
  std::uint64_t dropped_frames() const noexcept { return dropped_; }
  const control::SessionState& state() const noexcept { return state_; }
  const SessionConfig& config() const noexcept { return config_; }
  const data::GestureWindow& window() const noexcept { return window_; }

 private:
  model::Model model_;
  SessionConfig config_;
  std::vector<RawFrame> calibration_;
  std::optional<Baseline> baseline_;
  MovingAverage filter_;
  data::GestureWindow window_{};
  control::SessionState state_;
  std::uint64_t tick_ = 0;
  std::uint64_t frames_ = 0;
  std::uint64_t dropped_ = 0;
  std::optional<std::uint32_t> last_seq_;
  std::uint64_t last_time_us_ = 0;
  model::Probabilities last_probs_{};
  GestureClass last_detected_ = GestureClass::Invalid;
};

struct SessionResult {
  std::vector<StateEvent> events;
  skin::DecodeStats decode;
  std::uint64_t dropped_frames = 0;  // sequence gaps, or CRC failures if those are more
};

/// Runs a complete session over a capture file or simulator scenario. The weights come
/// from config.weights. Throws ConfigError for live sources.
SessionResult run_session(const SessionConfig& config);

/// Same, with an already loaded model and frame stream.
SessionResult run_session(const model::Model& model, const SessionConfig& config, std::span<const RawFrame> frames);

}  // namespace tactile::service
