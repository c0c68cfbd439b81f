#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tactile/signal/frame.hpp"

namespace tactile::service {

inline constexpr std::uint32_t kTickRateHz = 200;

/// Sample-and-hold conversion of an f_in Hz frame stream to the 200 Hz tick grid.
/// Input frame i is emitted ceil((i+1)*200/f_in) - ceil(i*200/f_in) times, so 60 Hz
/// repeats 4,3,3,4,3,3,... Output seq numbers and timestamps are rewritten on the grid,
/// starting from the first input frame.
class Resampler {
 public:
  explicit Resampler(std::uint32_t input_hz = kTickRateHz);

  void push(const RawFrame& frame, std::vector<RawFrame>& out);
  std::uint32_t input_hz() const noexcept { return input_hz_; }
  std::uint64_t frames_in() const noexcept { return in_; }
  std::uint64_t frames_out() const noexcept { return out_; }

 private:
  std::uint32_t input_hz_;
  std::uint64_t in_ = 0;
  std::uint64_t out_ = 0;
  std::uint32_t first_seq_ = 0;
  std::uint64_t first_time_us_ = 0;
};

std::vector<RawFrame> resample(std::span<const RawFrame> frames, std::uint32_t input_hz);

}  // namespace tactile::service
