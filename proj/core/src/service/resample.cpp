#include "tactile/service/resample.hpp"

#include "tactile/error.hpp"

namespace tactile::service {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

Resampler::Resampler(std::uint32_t input_hz) : input_hz_(input_hz) {
  if (input_hz == 0) throw ConfigError("input frame rate must be positive");
}

void Resampler::push(const RawFrame& frame, std::vector<RawFrame>& out) {
  if (in_ == 0) {
    first_seq_ = frame.seq;
    first_time_us_ = frame.timestamp_us;
  }
  const std::uint64_t target = ceil_div((in_ + 1) * kTickRateHz, input_hz_);
  ++in_;
  for (; out_ < target; ++out_) {
    RawFrame f = frame;
    f.seq = first_seq_ + static_cast<std::uint32_t>(out_);
    f.timestamp_us = first_time_us_ + out_ * static_cast<std::uint64_t>(kFramePeriodUs);
    out.push_back(f);
  }
}

std::vector<RawFrame> resample(std::span<const RawFrame> frames, std::uint32_t input_hz) {
  Resampler r(input_hz);
  std::vector<RawFrame> out;
  out.reserve(frames.size() * kTickRateHz / input_hz + 1);
  for (const auto& f : frames) r.push(f, out);
  return out;
}

}  // namespace tactile::service
