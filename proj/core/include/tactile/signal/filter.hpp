#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tactile/signal/frame.hpp"

namespace tactile {

/// Streaming causal moving average. The caller owns the state; one instance per stream.
class MovingAverage {
 public:
  explicit MovingAverage(int window = kFilterWindow);

  /// Mean over the last min(window, frames seen) inputs, per channel. Timestamp passes through.
  TactileFrame push(const TactileFrame& frame);
  void reset();

  int window() const noexcept { return window_; }

 private:
  int window_;
  std::vector<TactileFrame> history_;  // ring buffer
  std::size_t head_ = 0;
  std::size_t filled_ = 0;
};

/// Batch form of MovingAverage. Output length equals input length.
std::vector<TactileFrame> moving_average(std::span<const TactileFrame> stream, int window = kFilterWindow);

}  // namespace tactile
