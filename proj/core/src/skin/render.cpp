#include "tactile/skin/render.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tactile/error.hpp"
#include "tactile/skin/contact.hpp"

namespace tactile::skin {

std::vector<RawFrame> render(const GestureScript& script, const NoiseModel& noise, const RenderOptions& options) {
  if (!(options.fps > 0.0)) throw DomainError("render: fps must be positive");
  const auto n = static_cast<std::size_t>(std::llround(script.duration_ms * options.fps / 1000.0));

  std::mt19937_64 rng(noise.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<RawFrame> frames(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t_ms = static_cast<double>(k) * 1000.0 / options.fps;
    const auto offset_us = static_cast<std::uint64_t>(std::llround(static_cast<double>(k) * 1e6 / options.fps));
    const std::uint64_t stamp = options.start_time_us + offset_us;
    const double drift = noise.drift_rate * static_cast<double>(stamp) * 1e-6;

    const auto contacts = contacts_at(script, t_ms);
    const TactileFrame clean = contact_footprint(contacts);

    RawFrame& raw = frames[k];
    raw.seq = options.first_seq + static_cast<std::uint32_t>(k);
    raw.timestamp_us = stamp;
    for (int c = 0; c < kChannels; ++c) {
      double v = clean.values[c] + drift;
      if (noise.gaussian_sigma > 0.0) v += noise.gaussian_sigma * gauss(rng);
      const double counts = std::round(kBaselineCounts + kCountsPerUnit * v);
      raw.counts[c] = static_cast<std::uint16_t>(std::clamp(counts, 0.0, 65535.0));
    }
  }
  return frames;
}

std::vector<RawFrame> render_sequence(const std::vector<Segment>& segments, const NoiseModel& noise, double fps) {
  std::vector<RawFrame> out;
  for (const auto& segment : segments) {
    NoiseModel seg_noise = noise;
    seg_noise.rng_seed = segment.noise_seed;
    RenderOptions options;
    options.fps = fps;
    options.first_seq = static_cast<std::uint32_t>(out.size());
    options.start_time_us = static_cast<std::uint64_t>(std::llround(static_cast<double>(out.size()) * 1e6 / fps));
    auto part = render(segment.script, seg_noise, options);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace tactile::skin
