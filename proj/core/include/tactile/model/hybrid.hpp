#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tactile/model/tensor.hpp"

namespace tactile::model {

/// Convolution-transformer classifier dimensions. Defaults are the production model;
/// tests shrink them for finite-difference checks.
struct HybridConfig {
  int height = 10;
  int width = 10;
  int conv1_channels = 16;
  int conv2_channels = 32;
  int d_model = 64;
  int heads = 4;
  int ffn = 128;
  int layers = 4;
  int seq_len = 30;
  int head_hidden = 64;
  int classes = 15;

  int cells() const { return height * width; }
  /// Flattened conv2 output per frame: c2 x (h/2) x (w/2).
  int stem_features() const { return conv2_channels * (height / 2) * (width / 2); }
  /// Throws ConfigError on inconsistent dimensions.
  void validate() const;
  friend bool operator==(const HybridConfig&, const HybridConfig&) = default;
};

/// Pre-norm encoder block weights. qkv_weight packs [Q | K | V] column blocks.
template <typename T>
struct EncoderLayerParams {
  Matrix<T> ln1_gain, ln1_bias;
  Matrix<T> qkv_weight, qkv_bias;
  Matrix<T> out_weight, out_bias;
  Matrix<T> ln2_gain, ln2_bias;
  Matrix<T> ffn1_weight, ffn1_bias;
  Matrix<T> ffn2_weight, ffn2_bias;
};

template <typename T>
struct HybridParams {
  using Scalar = T;
  template <typename U>
  using Rebind = HybridParams<U>;

  HybridConfig config;

  // conv1_weight: 9 x c1, rows indexed by kernel tap (kr * 3 + kc).
  // conv2_weight: (c1 * 9) x c2, rows indexed by (input channel * 9 + tap).
  Matrix<T> conv1_weight, conv1_bias;
  Matrix<T> conv2_weight, conv2_bias;
  Matrix<T> proj_weight, proj_bias;
  std::vector<EncoderLayerParams<T>> layers;
  Matrix<T> head1_weight, head1_bias;
  Matrix<T> head2_weight, head2_bias;

  /// All tensors allocated at their configured shapes and zeroed; LayerNorm gains set to 1.
  static HybridParams shaped(const HybridConfig& config);

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
  static void visit_impl(Self& self, F& f) {
    static constexpr std::array<std::string_view, 12> kLayerNames = {
        "ln1.gain", "ln1.bias", "qkv.weight", "qkv.bias", "out.weight", "out.bias",
        "ln2.gain", "ln2.bias", "ffn1.weight", "ffn1.bias", "ffn2.weight", "ffn2.bias"};
    f("conv1.weight", self.conv1_weight);
    f("conv1.bias", self.conv1_bias);
    f("conv2.weight", self.conv2_weight);
    f("conv2.bias", self.conv2_bias);
    f("proj.weight", self.proj_weight);
    f("proj.bias", self.proj_bias);
    for (auto& l : self.layers) {
      const auto tensors = std::array{&l.ln1_gain,    &l.ln1_bias,  &l.qkv_weight,  &l.qkv_bias,
                                      &l.out_weight,  &l.out_bias,  &l.ln2_gain,    &l.ln2_bias,
                                      &l.ffn1_weight, &l.ffn1_bias, &l.ffn2_weight, &l.ffn2_bias};
      for (std::size_t i = 0; i < kLayerNames.size(); ++i) f(kLayerNames[i], *tensors[i]);
    }
    f("head1.weight", self.head1_weight);
    f("head1.bias", self.head1_bias);
    f("head2.weight", self.head2_weight);
    f("head2.bias", self.head2_bias);
  }
};

/// He/Xavier-uniform weights, zero biases, unit LayerNorm gains.
template <typename T>
HybridParams<T> init_hybrid(const HybridConfig& config, std::uint64_t seed);

/// Sinusoidal encoding: PE[t, 2i] = sin(t / 10000^(2i/d)), PE[t, 2i+1] = cos(same).
template <typename T>
Matrix<T> positional_encoding(int steps, int d_model);

/// Per-frame embeddings: conv3x3(1->c1) -> ReLU -> maxpool2 -> conv3x3(c1->c2) -> ReLU
/// -> flatten -> linear(c2*(h/2)*(w/2) -> d). `frames` is steps x cells; result steps x d.
template <typename T>
Matrix<T> stem_forward(const Matrix<T>& frames, const HybridParams<T>& params);

/// Attention probabilities captured during a forward pass: [layer][head] -> steps x steps.
template <typename T>
using AttentionTrace = std::vector<std::vector<Matrix<T>>>;

/// Stack of pre-norm encoder blocks over a steps x d input (positional encoding
/// already added). Throws NumericError on non-finite input.
template <typename T>
Matrix<T> encoder_forward(const Matrix<T>& z, const HybridParams<T>& params, AttentionTrace<T>* trace = nullptr);

/// Pre-softmax class scores for a window (steps x cells).
template <typename T>
Matrix<T> hybrid_logits(const Matrix<T>& window, const HybridParams<T>& params);

/// Class probabilities (1 x classes). Throws ShapeError on a wrong window shape.
template <typename T>
Matrix<T> hybrid_classify(const Matrix<T>& window, const HybridParams<T>& params);

/// Cross-entropy of the window against `label`. Adds loss_scale * dLoss/dParams into
/// `grads` (which must be shaped like params) and returns the unscaled loss.
template <typename T>
T hybrid_backward(const Matrix<T>& window, int label, const HybridParams<T>& params, HybridParams<T>& grads,
                  T loss_scale = T(1));

}  // namespace tactile::model
