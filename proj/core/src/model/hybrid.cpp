#include "tactile/model/hybrid.hpp"

#include <cmath>
#include <string>

#include "layers.hpp"
#include "tactile/error.hpp"

namespace tactile::model {

using detail::add_bias;
using detail::LayerNormCache;

void HybridConfig::validate() const {
  if (height < 2 || width < 2 || height % 2 != 0 || width % 2 != 0) {
    throw ConfigError("frame height/width must be even and >= 2");
  }
  if (conv1_channels < 1 || conv2_channels < 1 || d_model < 2 || heads < 1 || ffn < 1 || layers < 0 ||
      seq_len < 1 || head_hidden < 1 || classes < 2) {
    throw ConfigError("hybrid dimensions must be positive");
  }
  if (d_model % heads != 0) throw ConfigError("d_model must be divisible by the head count");
  if (d_model % 2 != 0) throw ConfigError("d_model must be even for sinusoidal encoding");
}

template <typename T>
HybridParams<T> HybridParams<T>::shaped(const HybridConfig& c) {
  c.validate();
  HybridParams<T> p;
  p.config = c;
  const int d = c.d_model;
  p.conv1_weight = Matrix<T>::Zero(9, c.conv1_channels);
  p.conv1_bias = Matrix<T>::Zero(1, c.conv1_channels);
  p.conv2_weight = Matrix<T>::Zero(9 * c.conv1_channels, c.conv2_channels);
  p.conv2_bias = Matrix<T>::Zero(1, c.conv2_channels);
  p.proj_weight = Matrix<T>::Zero(c.stem_features(), d);
  p.proj_bias = Matrix<T>::Zero(1, d);
  p.layers.resize(static_cast<std::size_t>(c.layers));
  for (auto& l : p.layers) {
    l.ln1_gain = Matrix<T>::Ones(1, d);
    l.ln1_bias = Matrix<T>::Zero(1, d);
    l.qkv_weight = Matrix<T>::Zero(d, 3 * d);
    l.qkv_bias = Matrix<T>::Zero(1, 3 * d);
    l.out_weight = Matrix<T>::Zero(d, d);
    l.out_bias = Matrix<T>::Zero(1, d);
    l.ln2_gain = Matrix<T>::Ones(1, d);
    l.ln2_bias = Matrix<T>::Zero(1, d);
    l.ffn1_weight = Matrix<T>::Zero(d, c.ffn);
    l.ffn1_bias = Matrix<T>::Zero(1, c.ffn);
    l.ffn2_weight = Matrix<T>::Zero(c.ffn, d);
    l.ffn2_bias = Matrix<T>::Zero(1, d);
  }
  p.head1_weight = Matrix<T>::Zero(d, c.head_hidden);
  p.head1_bias = Matrix<T>::Zero(1, c.head_hidden);
  p.head2_weight = Matrix<T>::Zero(c.head_hidden, c.classes);
  p.head2_bias = Matrix<T>::Zero(1, c.classes);
  return p;
}

template <typename T>
HybridParams<T> init_hybrid(const HybridConfig& c, std::uint64_t seed) {
  auto p = HybridParams<T>::shaped(c);
  std::mt19937_64 rng(seed);
  const auto he = [](double fan_in) { return std::sqrt(6.0 / fan_in); };
  const auto xavier = [](double fan_in, double fan_out) { return std::sqrt(6.0 / (fan_in + fan_out)); };
  const double d = c.d_model;
  fill_uniform(p.conv1_weight, he(9.0), rng);
  fill_uniform(p.conv2_weight, he(9.0 * c.conv1_channels), rng);
  fill_uniform(p.proj_weight, xavier(c.stem_features(), d), rng);
  const double residual_scale = 1.0 / std::sqrt(2.0 * std::max(1, c.layers));
  for (auto& l : p.layers) {
    fill_uniform(l.qkv_weight, xavier(d, d), rng);
    fill_uniform(l.out_weight, xavier(d, d) * residual_scale, rng);
    fill_uniform(l.ffn1_weight, he(d), rng);
    fill_uniform(l.ffn2_weight, xavier(c.ffn, d) * residual_scale, rng);
  }
  fill_uniform(p.head1_weight, he(d), rng);
  fill_uniform(p.head2_weight, xavier(c.head_hidden, c.classes), rng);
  return p;
}

template <typename T>
Matrix<T> positional_encoding(int steps, int d_model) {
  Matrix<T> pe(steps, d_model);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < d_model; i += 2) {
      const double angle = t / std::pow(10000.0, static_cast<double>(i) / d_model);
      pe(t, i) = static_cast<T>(std::sin(angle));
      if (i + 1 < d_model) pe(t, i + 1) = static_cast<T>(std::cos(angle));
    }
  }
  return pe;
}

namespace {

/// Rows of `input` are (step, row, col) positions of an h x w grid, columns are channels.
/// Output rows are the same positions; column (ch * 9 + kr * 3 + kc) holds the 3x3
/// neighbourhood with zero padding.
template <typename T>
Matrix<T> im2col(const Matrix<T>& input, int steps, int h, int w) {
  const Eigen::Index channels = input.cols();
  Matrix<T> cols = Matrix<T>::Zero(static_cast<Eigen::Index>(steps) * h * w, channels * 9);
  for (int t = 0; t < steps; ++t) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const Eigen::Index out_row = (static_cast<Eigen::Index>(t) * h + r) * w + c;
        for (int kr = 0; kr < 3; ++kr) {
          const int rr = r + kr - 1;
          if (rr < 0 || rr >= h) continue;
          for (int kc = 0; kc < 3; ++kc) {
            const int cc = c + kc - 1;
            if (cc < 0 || cc >= w) continue;
            const Eigen::Index in_row = (static_cast<Eigen::Index>(t) * h + rr) * w + cc;
            const int tap = kr * 3 + kc;
            for (Eigen::Index ch = 0; ch < channels; ++ch) cols(out_row, ch * 9 + tap) = input(in_row, ch);
          }
        }
      }
    }
  }
  return cols;
}

template <typename T>
Matrix<T> col2im(const Matrix<T>& dcols, int steps, int h, int w, Eigen::Index channels) {
  Matrix<T> dinput = Matrix<T>::Zero(static_cast<Eigen::Index>(steps) * h * w, channels);
  for (int t = 0; t < steps; ++t) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const Eigen::Index out_row = (static_cast<Eigen::Index>(t) * h + r) * w + c;
        for (int kr = 0; kr < 3; ++kr) {
          const int rr = r + kr - 1;
          if (rr < 0 || rr >= h) continue;
          for (int kc = 0; kc < 3; ++kc) {
            const int cc = c + kc - 1;
            if (cc < 0 || cc >= w) continue;
            const Eigen::Index in_row = (static_cast<Eigen::Index>(t) * h + rr) * w + cc;
            const int tap = kr * 3 + kc;
            for (Eigen::Index ch = 0; ch < channels; ++ch) dinput(in_row, ch) += dcols(out_row, ch * 9 + tap);
          }
        }
      }
    }
  }
  return dinput;
}

using IndexMatrix = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
struct StemTape {
  Matrix<T> cols1, act1;
  IndexMatrix pool_arg;  // source row in act1 per pooled (row, channel)
  Matrix<T> cols2, act2;
};

template <typename T>
Matrix<T> stem_impl(const Matrix<T>& frames, const HybridParams<T>& p, StemTape<T>& tape) {
  const auto& c = p.config;
  if (frames.cols() != c.cells()) {
    throw ShapeError("stem expects " + std::to_string(c.cells()) + " cells per frame, got " +
                     std::to_string(frames.cols()));
  }
  const int steps = static_cast<int>(frames.rows());
  const int h = c.height, w = c.width, h2 = h / 2, w2 = w / 2;

  // Steps x cells (row-major) is the same memory as (steps * cells) x 1.
  const Eigen::Map<const Matrix<T>> pixels(frames.data(), static_cast<Eigen::Index>(steps) * h * w, 1);
  tape.cols1 = im2col<T>(pixels, steps, h, w);
  tape.act1 = tape.cols1 * p.conv1_weight;
  add_bias(tape.act1, p.conv1_bias);
  detail::relu_inplace(tape.act1);

  const Eigen::Index c1 = c.conv1_channels;
  Matrix<T> pooled(static_cast<Eigen::Index>(steps) * h2 * w2, c1);
  tape.pool_arg.resize(pooled.rows(), c1);
  for (int t = 0; t < steps; ++t) {
    for (int r = 0; r < h2; ++r) {
      for (int col = 0; col < w2; ++col) {
        const Eigen::Index out_row = (static_cast<Eigen::Index>(t) * h2 + r) * w2 + col;
        for (Eigen::Index ch = 0; ch < c1; ++ch) {
          Eigen::Index best = -1;
          T best_val = T(0);
          for (int dr = 0; dr < 2; ++dr) {
            for (int dc = 0; dc < 2; ++dc) {
              const Eigen::Index src = (static_cast<Eigen::Index>(t) * h + 2 * r + dr) * w + 2 * col + dc;
              if (best < 0 || tape.act1(src, ch) > best_val) {
                best = src;
                best_val = tape.act1(src, ch);
              }
            }
          }
          pooled(out_row, ch) = best_val;
          tape.pool_arg(out_row, ch) = best;
        }
      }
    }
  }

  tape.cols2 = im2col<T>(pooled, steps, h2, w2);
  tape.act2 = tape.cols2 * p.conv2_weight;
  add_bias(tape.act2, p.conv2_bias);
  detail::relu_inplace(tape.act2);

  // act2 rows for one step are contiguous, so each step flattens to (position, channel).
  const Eigen::Map<const Matrix<T>> flat(tape.act2.data(), steps, c.stem_features());
  Matrix<T> z = flat * p.proj_weight;
  add_bias(z, p.proj_bias);
  return z;
}

template <typename T>
void stem_backward(const Matrix<T>& dz, const HybridParams<T>& p, const StemTape<T>& tape, HybridParams<T>& g) {
  const auto& c = p.config;
  const int steps = static_cast<int>(dz.rows());
  const int h2 = c.height / 2, w2 = c.width / 2;

  const Eigen::Map<const Matrix<T>> flat(tape.act2.data(), steps, c.stem_features());
  g.proj_weight.noalias() += flat.transpose() * dz;
  g.proj_bias += dz.colwise().sum();
  Matrix<T> dact2(tape.act2.rows(), tape.act2.cols());
  Eigen::Map<Matrix<T>>(dact2.data(), steps, c.stem_features()).noalias() = dz * p.proj_weight.transpose();
  detail::relu_mask(dact2, tape.act2);
  g.conv2_weight.noalias() += tape.cols2.transpose() * dact2;
  g.conv2_bias += dact2.colwise().sum();

  const Matrix<T> dcols2 = dact2 * p.conv2_weight.transpose();
  const Matrix<T> dpooled = col2im<T>(dcols2, steps, h2, w2, c.conv1_channels);

  Matrix<T> dact1 = Matrix<T>::Zero(tape.act1.rows(), tape.act1.cols());
  for (Eigen::Index i = 0; i < dpooled.rows(); ++i) {
    for (Eigen::Index ch = 0; ch < dpooled.cols(); ++ch) dact1(tape.pool_arg(i, ch), ch) += dpooled(i, ch);
  }
  detail::relu_mask(dact1, tape.act1);
  g.conv1_weight.noalias() += tape.cols1.transpose() * dact1;
  g.conv1_bias += dact1.colwise().sum();
}

template <typename T>
struct LayerTape {
  LayerNormCache<T> ln1, ln2;
  Matrix<T> h1, qkv, o, h2, f_act;
  std::vector<Matrix<T>> attn;
};

template <typename T>
Matrix<T> layer_forward(const Matrix<T>& x, const EncoderLayerParams<T>& l, const HybridConfig& c,
                        LayerTape<T>& tape) {
  const Eigen::Index steps = x.rows();
  const int d = c.d_model, dh = c.d_model / c.heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  tape.h1 = detail::layer_norm(x, l.ln1_gain, l.ln1_bias, tape.ln1);
  tape.qkv = tape.h1 * l.qkv_weight;
  add_bias(tape.qkv, l.qkv_bias);

  tape.o.resize(steps, d);
  tape.attn.resize(static_cast<std::size_t>(c.heads));
  for (int head = 0; head < c.heads; ++head) {
    const auto q = tape.qkv.middleCols(head * dh, dh);
    const auto k = tape.qkv.middleCols(d + head * dh, dh);
    const auto v = tape.qkv.middleCols(2 * d + head * dh, dh);
    Matrix<T>& a = tape.attn[static_cast<std::size_t>(head)];
    a.noalias() = (q * k.transpose()) * scale;
    detail::softmax_rows(a);
    tape.o.middleCols(head * dh, dh).noalias() = a * v;
  }
  Matrix<T> x1 = x + tape.o * l.out_weight;
  add_bias(x1, l.out_bias);

  tape.h2 = detail::layer_norm(x1, l.ln2_gain, l.ln2_bias, tape.ln2);
  tape.f_act = tape.h2 * l.ffn1_weight;
  add_bias(tape.f_act, l.ffn1_bias);
  detail::relu_inplace(tape.f_act);
  Matrix<T> x2 = x1 + tape.f_act * l.ffn2_weight;
  add_bias(x2, l.ffn2_bias);
  return x2;
}

template <typename T>
Matrix<T> layer_backward(const Matrix<T>& dx2, const EncoderLayerParams<T>& l, const HybridConfig& c,
                         const LayerTape<T>& tape, EncoderLayerParams<T>& g) {
  const int d = c.d_model, dh = c.d_model / c.heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  g.ffn2_weight.noalias() += tape.f_act.transpose() * dx2;
  g.ffn2_bias += dx2.colwise().sum();
  Matrix<T> df = dx2 * l.ffn2_weight.transpose();
  detail::relu_mask(df, tape.f_act);
  g.ffn1_weight.noalias() += tape.h2.transpose() * df;
  g.ffn1_bias += df.colwise().sum();
  const Matrix<T> dh2 = df * l.ffn1_weight.transpose();
  const Matrix<T> dx1 = dx2 + detail::layer_norm_backward(dh2, l.ln2_gain, tape.ln2, g.ln2_gain, g.ln2_bias);

  g.out_weight.noalias() += tape.o.transpose() * dx1;
  g.out_bias += dx1.colwise().sum();
  const Matrix<T> d_o = dx1 * l.out_weight.transpose();

  Matrix<T> dqkv(tape.qkv.rows(), tape.qkv.cols());
  for (int head = 0; head < c.heads; ++head) {
    const auto q = tape.qkv.middleCols(head * dh, dh);
    const auto k = tape.qkv.middleCols(d + head * dh, dh);
    const auto v = tape.qkv.middleCols(2 * d + head * dh, dh);
    const Matrix<T>& a = tape.attn[static_cast<std::size_t>(head)];
    const auto doh = d_o.middleCols(head * dh, dh);

    const Matrix<T> da = doh * v.transpose();
    dqkv.middleCols(2 * d + head * dh, dh).noalias() = a.transpose() * doh;
    const auto row_dot = (da.array() * a.array()).rowwise().sum().eval();
    const Matrix<T> ds = (a.array() * (da.array().colwise() - row_dot)).matrix() * scale;
    dqkv.middleCols(head * dh, dh).noalias() = ds * k;
    dqkv.middleCols(d + head * dh, dh).noalias() = ds.transpose() * q;
  }
  g.qkv_weight.noalias() += tape.h1.transpose() * dqkv;
  g.qkv_bias += dqkv.colwise().sum();
  const Matrix<T> dh1 = dqkv * l.qkv_weight.transpose();
  return dx1 + detail::layer_norm_backward(dh1, l.ln1_gain, tape.ln1, g.ln1_gain, g.ln1_bias);
}

template <typename T>
struct HybridTape {
  StemTape<T> stem;
  std::vector<LayerTape<T>> layers;
  Matrix<T> pooled, hidden, probs;
};

template <typename T>
void check_window(const Matrix<T>& window, const HybridConfig& c) {
  if (window.rows() != c.seq_len || window.cols() != c.cells()) {
    throw ShapeError("window must be " + std::to_string(c.seq_len) + " x " + std::to_string(c.cells()) + ", got " +
                     std::to_string(window.rows()) + " x " + std::to_string(window.cols()));
  }
}

template <typename T>
Matrix<T> forward_impl(const Matrix<T>& window, const HybridParams<T>& p, HybridTape<T>& tape) {
  const auto& c = p.config;
  check_window(window, c);
  Matrix<T> x = stem_impl(window, p, tape.stem);
  x += positional_encoding<T>(c.seq_len, c.d_model);
  tape.layers.resize(p.layers.size());
  for (std::size_t i = 0; i < p.layers.size(); ++i) x = layer_forward(x, p.layers[i], c, tape.layers[i]);

  tape.pooled = x.colwise().mean();
  tape.hidden = tape.pooled * p.head1_weight;
  add_bias(tape.hidden, p.head1_bias);
  detail::relu_inplace(tape.hidden);
  Matrix<T> logits = tape.hidden * p.head2_weight;
  add_bias(logits, p.head2_bias);
  return logits;
}

}  // namespace

template <typename T>
Matrix<T> stem_forward(const Matrix<T>& frames, const HybridParams<T>& params) {
  StemTape<T> tape;
  return stem_impl(frames, params, tape);
}

template <typename T>
Matrix<T> encoder_forward(const Matrix<T>& z, const HybridParams<T>& params, AttentionTrace<T>* trace) {
  if (!z.allFinite()) throw NumericError("encoder input contains non-finite values");
  if (z.cols() != params.config.d_model) throw ShapeError("encoder input width must equal d_model");
  Matrix<T> x = z;
  if (trace) trace->clear();
  for (const auto& layer : params.layers) {
    LayerTape<T> tape;
    x = layer_forward(x, layer, params.config, tape);
    if (trace) trace->push_back(std::move(tape.attn));
  }
  return x;
}

template <typename T>
Matrix<T> hybrid_logits(const Matrix<T>& window, const HybridParams<T>& params) {
  HybridTape<T> tape;
  return forward_impl(window, params, tape);
}

template <typename T>
Matrix<T> hybrid_classify(const Matrix<T>& window, const HybridParams<T>& params) {
  Matrix<T> probs = hybrid_logits(window, params);
  detail::softmax_rows(probs);
  return probs;
}

template <typename T>
T hybrid_backward(const Matrix<T>& window, int label, const HybridParams<T>& p, HybridParams<T>& g, T loss_scale) {
  const auto& c = p.config;
  if (label < 0 || label >= c.classes) throw DomainError("label out of range");
  HybridTape<T> tape;
  Matrix<T> probs = forward_impl(window, p, tape);
  detail::softmax_rows(probs);
  const T loss = -std::log(probs(0, label));

  const Matrix<T> dlogits = detail::cross_entropy_grad(probs, label, loss_scale);
  g.head2_weight.noalias() += tape.hidden.transpose() * dlogits;
  g.head2_bias += dlogits;
  Matrix<T> dhidden = dlogits * p.head2_weight.transpose();
  detail::relu_mask(dhidden, tape.hidden);
  g.head1_weight.noalias() += tape.pooled.transpose() * dhidden;
  g.head1_bias += dhidden;
  const Matrix<T> dpooled = dhidden * p.head1_weight.transpose();

  Matrix<T> dx = dpooled.replicate(c.seq_len, 1) / static_cast<T>(c.seq_len);
  for (std::size_t i = p.layers.size(); i-- > 0;) {
    dx = layer_backward(dx, p.layers[i], c, tape.layers[i], g.layers[i]);
  }
  stem_backward(dx, p, tape.stem, g);
  return loss;
}

#define TACTILE_INSTANTIATE_HYBRID(T)                                                                     \
  template struct HybridParams<T>;                                                                        \
  template HybridParams<T> init_hybrid<T>(const HybridConfig&, std::uint64_t);                           \
  template Matrix<T> positional_encoding<T>(int, int);                                                   \
  template Matrix<T> stem_forward<T>(const Matrix<T>&, const HybridParams<T>&);                          \
  template Matrix<T> encoder_forward<T>(const Matrix<T>&, const HybridParams<T>&, AttentionTrace<T>*);   \
  template Matrix<T> hybrid_logits<T>(const Matrix<T>&, const HybridParams<T>&);                         \
  template Matrix<T> hybrid_classify<T>(const Matrix<T>&, const HybridParams<T>&);                       \
  template T hybrid_backward<T>(const Matrix<T>&, int, const HybridParams<T>&, HybridParams<T>&, T);

TACTILE_INSTANTIATE_HYBRID(float)
TACTILE_INSTANTIATE_HYBRID(double)

}  // namespace tactile::model
