#include "tactile/signal/filter.hpp"

#include "tactile/error.hpp"

namespace tactile {

MovingAverage::MovingAverage(int window) : window_(window) {
  if (window < 1) throw DomainError("moving-average window must be >= 1");
  history_.resize(static_cast<std::size_t>(window));
}

TactileFrame MovingAverage::push(const TactileFrame& frame) {
  history_[head_] = frame;
  head_ = (head_ + 1) % history_.size();
  if (filled_ < history_.size()) ++filled_;

  // Summed from scratch each tick so constant inputs stay exact fixed points.
  TactileFrame out;
  out.timestamp_us = frame.timestamp_us;
  for (std::size_t k = 0; k < filled_; ++k) {
    const auto& v = history_[k].values;
    for (int c = 0; c < kChannels; ++c) out.values[c] += v[c];
  }
  const double n = static_cast<double>(filled_);
  for (auto& v : out.values) v /= n;
  return out;
}

void MovingAverage::reset() {
  head_ = 0;
  filled_ = 0;
}

std::vector<TactileFrame> moving_average(std::span<const TactileFrame> stream, int window) {
  MovingAverage filter(window);
  std::vector<TactileFrame> out;
  out.reserve(stream.size());
  for (const auto& f : stream) out.push_back(filter.push(f));
  return out;
}

}  // namespace tactile
