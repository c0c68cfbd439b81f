#pragma once

#include <cstdint>
#include <string_view>

#include "tactile/model/tensor.hpp"

namespace tactile::model {

/// Bidirectional LSTM baseline over flattened frames.
struct LstmConfig {
  int input = 100;
  int hidden = 128;
  int seq_len = 30;
  int classes = 15;

  void validate() const;
  friend bool operator==(const LstmConfig&, const LstmConfig&) = default;
};

/// Gate columns are packed [input | forget | cell | output], hidden wide each.
template <typename T>
struct LstmParams {
  using Scalar = T;
  template <typename U>
  using Rebind = LstmParams<U>;

  LstmConfig config;
  Matrix<T> fwd_input_weight, fwd_recurrent_weight, fwd_bias;
  Matrix<T> bwd_input_weight, bwd_recurrent_weight, bwd_bias;
  Matrix<T> head_weight, head_bias;  // (2 * hidden) x classes

  static LstmParams shaped(const LstmConfig& config);

  template <typename F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& s, F& f) {
    f("fwd.input_weight", s.fwd_input_weight);
    f("fwd.recurrent_weight", s.fwd_recurrent_weight);
    f("fwd.bias", s.fwd_bias);
    f("bwd.input_weight", s.bwd_input_weight);
    f("bwd.recurrent_weight", s.bwd_recurrent_weight);
    f("bwd.bias", s.bwd_bias);
    f("head.weight", s.head_weight);
    f("head.bias", s.head_bias);
  }
};

/// Uniform(+-1/sqrt(hidden)) weights, forget-gate bias 1.
template <typename T>
LstmParams<T> init_lstm(const LstmConfig& config, std::uint64_t seed);

template <typename T>
Matrix<T> lstm_logits(const Matrix<T>& window, const LstmParams<T>& params);

template <typename T>
Matrix<T> lstm_classify(const Matrix<T>& window, const LstmParams<T>& params);

/// Backpropagation through time; same contract as hybrid_backward.
template <typename T>
T lstm_backward(const Matrix<T>& window, int label, const LstmParams<T>& params, LstmParams<T>& grads,
                T loss_scale = T(1));

}  // namespace tactile::model
