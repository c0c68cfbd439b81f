#include "tactile/data/augment.hpp"

#include <algorithm>
#include <random>

#include "tactile/error.hpp"
#include "tactile/signal/filter.hpp"
#include "tactile/skin/render.hpp"

namespace tactile::data {

GestureWindow noise_canvas(std::uint64_t seed) {
  const double sigma = skin::NoiseModel{}.gaussian_sigma;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  MovingAverage filter;

  GestureWindow canvas;
  // Warm the filter so every canvas frame averages a full window.
  const int warmup = kFilterWindow - 1;
  for (int t = 0; t < warmup + kWindowFrames; ++t) {
    TactileFrame f;
    for (auto& v : f.values) v = gauss(rng);
    const TactileFrame smoothed = filter.push(f);
    if (t < warmup) continue;
    for (int c = 0; c < kChannels; ++c) canvas.at(t - warmup, c) = static_cast<float>(smoothed.values[c]);
  }
  return canvas;
}

Sample compose_sample(const Recording& rec, const SlicePlacement& placement) {
  if (placement.length < 0 || placement.offset < 0 || placement.offset + placement.length > kWindowFrames ||
      placement.source_begin + static_cast<std::size_t>(placement.length) > rec.frames.size()) {
    throw AugmentationError("slice placement out of bounds");
  }
  Sample sample;
  sample.label = rec.label;
  sample.window = noise_canvas(placement.canvas_seed);
  for (int k = 0; k < placement.length; ++k) {
    const auto& src = rec.frames[placement.source_begin + static_cast<std::size_t>(k)].values;
    for (int c = 0; c < kChannels; ++c) {
      float& dst = sample.window.at(placement.offset + k, c);
      dst = static_cast<float>(std::clamp(static_cast<double>(dst) + src[c], kClampLow, kClampHigh));
    }
  }
  return sample;
}

std::vector<AugmentedSample> augment_recording_detailed(const Recording& rec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw AugmentationError("augmentation count must be >= 1");
  if (rec.core.end > rec.frames.size() || rec.core.size() < kMinCoreFrames) {
    throw AugmentationError("core span too short for augmentation");
  }
  const auto core_len = static_cast<int>(rec.core.size());

  std::mt19937_64 rng(seed);
  std::vector<AugmentedSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SlicePlacement p;
    const int wanted = std::uniform_int_distribution<int>(kSliceMin, kSliceMax)(rng);
    p.length = std::min(wanted, core_len);
    p.source_begin = rec.core.begin + static_cast<std::size_t>(
                                          std::uniform_int_distribution<int>(0, core_len - p.length)(rng));
    p.offset = std::uniform_int_distribution<int>(0, kWindowFrames - p.length)(rng);
    p.canvas_seed = rng();
    out.push_back({compose_sample(rec, p), p});
  }
  return out;
}

std::vector<Sample> augment_recording(const Recording& rec, std::size_t n, std::uint64_t seed) {
  auto detailed = augment_recording_detailed(rec, n, seed);
  std::vector<Sample> out;
  out.reserve(detailed.size());
  for (auto& d : detailed) out.push_back(std::move(d.sample));
  return out;
}

}  // namespace tactile::data
