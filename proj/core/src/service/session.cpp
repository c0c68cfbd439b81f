#include "tactile/service/session.hpp"

#include <algorithm>

#include "tactile/error.hpp"
#include "tactile/service/resample.hpp"
#include "tactile/service/scenario.hpp"

namespace tactile::service {

bool contact_present(const TactileFrame& frame, double threshold) {
  auto v = frame.values;
  auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  return frame.max_value() - *mid > threshold;
}

Session::Session(model::Model model, SessionConfig config)
    : model_(std::move(model)), config_(std::move(config)), filter_(kFilterWindow) {
  config_.validate();
  state_.pose = config_.initial_pose;
  state_.initial_pose = config_.initial_pose;
  state_.home_pose = config_.home_pose;
  calibration_.reserve(kCalibrationFrames);
}

void Session::reconfigure(const SessionConfig& config) {
  config.validate();
  config_ = config;
  state_.initial_pose = config_.initial_pose;
  state_.home_pose = config_.home_pose;
}

std::optional<StateEvent> Session::push(const RawFrame& frame) {
  if (last_seq_ && frame.seq > *last_seq_ + 1) dropped_ += frame.seq - *last_seq_ - 1;
  last_seq_ = frame.seq;
  last_time_us_ = frame.timestamp_us;
  ++frames_;

  if (!baseline_) {
    calibration_.push_back(frame);
    if (calibration_.size() == kCalibrationFrames) {
      baseline_ = calibrate(calibration_);
      calibration_ = {};
    }
    return std::nullopt;
  }

  const TactileFrame filtered = filter_.push(subtract_baseline(frame, *baseline_, skin::kCountsPerUnit));

  // Shift the trailing window one frame and append the newest.
  auto& w = window_.values;
  std::copy(w.begin() + kChannels, w.end(), w.begin());
  std::transform(filtered.values.begin(), filtered.values.end(), w.end() - kChannels,
                 [](double x) { return static_cast<float>(x); });

  StateEvent ev;
  ev.tick = tick_++;
  ev.timestamp_us = frame.timestamp_us;
  ev.probs = model::classify(model_, window_);
  ev.detected = model::argmax(ev.probs);
  ev.contact = contact_present(filtered, config_.contact_threshold);
  auto [next, command] = control::step(state_, ev.detected, ev.contact, config_.dt(), config_.control);
  state_ = std::move(next);
  ev.active = state_.active;
  ev.command = command;
  ev.recovering = state_.aux_in_progress();
  ev.pose = state_.pose;
  last_probs_ = ev.probs;
  last_detected_ = ev.detected;
  return ev;
}

StateEvent Session::halt() {
  state_.active.reset();
  state_.candidate.reset();
  state_.dwell_count = 0;
  state_.recovery.reset();
  StateEvent ev;
  ev.tick = tick_++;
  ev.timestamp_us = last_time_us_ + static_cast<std::uint64_t>(kFramePeriodUs);
  ev.probs = last_probs_;
  ev.detected = last_detected_;
  ev.contact = false;
  ev.command = control::Twist::zero();
  ev.pose = state_.pose;
  return ev;
}

SessionResult run_session(const model::Model& model, const SessionConfig& config, std::span<const RawFrame> frames) {
  SessionResult result;
  Session session(model, config);
  Resampler resampler(config.input_rate_hz);
  std::vector<RawFrame> ticks;
  std::optional<std::uint32_t> last_seq;
  for (const auto& f : frames) {
    if (last_seq && f.seq > *last_seq + 1) result.dropped_frames += f.seq - *last_seq - 1;
    last_seq = f.seq;
    ticks.clear();
    resampler.push(f, ticks);
    for (const auto& t : ticks) {
      if (auto ev = session.push(t)) result.events.push_back(std::move(*ev));
    }
  }
  return result;
}

SessionResult run_session(const SessionConfig& config) {
  config.validate();
  const model::Model model = model::load_params(config.weights);
  switch (config.source) {
    case InputSource::Capture: {
      auto decoded = skin::read_capture(config.capture);
      auto result = run_session(model, config, decoded.frames);
      result.decode = decoded.stats;
      // A corrupt record inside the stream already shows up as a sequence gap; only
      // ones at the very end would go unnoticed.
      result.dropped_frames = std::max<std::uint64_t>(result.dropped_frames, decoded.stats.crc_failures);
      return result;
    }
    case InputSource::Simulator: {
      const auto frames = render_scenario(parse_scenario(config.scenario), config.scenario_seed);
      return run_session(model, config, frames);
    }
    case InputSource::Live:
      break;
  }
  throw ConfigError("live input needs the serve endpoint");
}

}  // namespace tactile::service
