#include "tactile/model/lstm.hpp"

#include <cmath>
#include <string>

#include "layers.hpp"
#include "tactile/error.hpp"

namespace tactile::model {

void LstmConfig::validate() const {
  if (input < 1 || hidden < 1 || seq_len < 1 || classes < 2) throw ConfigError("lstm dimensions must be positive");
}

template <typename T>
LstmParams<T> LstmParams<T>::shaped(const LstmConfig& c) {
  c.validate();
  LstmParams<T> p;
  p.config = c;
  const int g = 4 * c.hidden;
  p.fwd_input_weight = Matrix<T>::Zero(c.input, g);
  p.fwd_recurrent_weight = Matrix<T>::Zero(c.hidden, g);
  p.fwd_bias = Matrix<T>::Zero(1, g);
  p.bwd_input_weight = Matrix<T>::Zero(c.input, g);
  p.bwd_recurrent_weight = Matrix<T>::Zero(c.hidden, g);
  p.bwd_bias = Matrix<T>::Zero(1, g);
  p.head_weight = Matrix<T>::Zero(2 * c.hidden, c.classes);
  p.head_bias = Matrix<T>::Zero(1, c.classes);
  return p;
}

template <typename T>
LstmParams<T> init_lstm(const LstmConfig& c, std::uint64_t seed) {
  auto p = LstmParams<T>::shaped(c);
  std::mt19937_64 rng(seed);
  const double k = 1.0 / std::sqrt(static_cast<double>(c.hidden));
  for (auto* m : {&p.fwd_input_weight, &p.fwd_recurrent_weight, &p.bwd_input_weight, &p.bwd_recurrent_weight}) {
    fill_uniform(*m, k, rng);
  }
  p.fwd_bias.middleCols(c.hidden, c.hidden).setOnes();
  p.bwd_bias.middleCols(c.hidden, c.hidden).setOnes();
  fill_uniform(p.head_weight, std::sqrt(6.0 / (2.0 * c.hidden + c.classes)), rng);
  return p;
}

namespace {

template <typename T>
T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

/// Per-step activations of one direction, indexed by processing step.
template <typename T>
struct DirectionTape {
  std::vector<int> order;  // time index of each processing step
  Matrix<T> gates;         // steps x 4H, activated
  Matrix<T> cell;          // steps x H
  Matrix<T> cell_tanh;     // steps x H
  Matrix<T> hidden;        // steps x H
};

template <typename T>
void run_direction(const Matrix<T>& x, const Matrix<T>& wx, const Matrix<T>& wh, const Matrix<T>& b, bool reverse,
                   DirectionTape<T>& tape) {
  const int steps = static_cast<int>(x.rows());
  const Eigen::Index h = wh.rows();
  Matrix<T> pre = x * wx;
  detail::add_bias(pre, b);

  tape.order.resize(static_cast<std::size_t>(steps));
  tape.gates.resize(steps, 4 * h);
  tape.cell.resize(steps, h);
  tape.cell_tanh.resize(steps, h);
  tape.hidden.resize(steps, h);

  Matrix<T> h_prev = Matrix<T>::Zero(1, h);
  Matrix<T> c_prev = Matrix<T>::Zero(1, h);
  for (int s = 0; s < steps; ++s) {
    const int t = reverse ? steps - 1 - s : s;
    tape.order[static_cast<std::size_t>(s)] = t;
    Matrix<T> z = pre.row(t) + h_prev * wh;
    for (Eigen::Index j = 0; j < h; ++j) {
      const T i = sigmoid(z(0, j));
      const T f = sigmoid(z(0, h + j));
      const T g = std::tanh(z(0, 2 * h + j));
      const T o = sigmoid(z(0, 3 * h + j));
      const T cnew = f * c_prev(0, j) + i * g;
      const T ct = std::tanh(cnew);
      tape.gates(s, j) = i;
      tape.gates(s, h + j) = f;
      tape.gates(s, 2 * h + j) = g;
      tape.gates(s, 3 * h + j) = o;
      tape.cell(s, j) = cnew;
      tape.cell_tanh(s, j) = ct;
      tape.hidden(s, j) = o * ct;
    }
    h_prev = tape.hidden.row(s);
    c_prev = tape.cell.row(s);
  }
}

/// Backpropagates dL/dh of the last processing step through the whole direction.
template <typename T>
void direction_backward(const Matrix<T>& x, const Matrix<T>& wh, const DirectionTape<T>& tape,
                        const Matrix<T>& dh_last, Matrix<T>& dwx, Matrix<T>& dwh, Matrix<T>& db) {
  const int steps = static_cast<int>(tape.order.size());
  const Eigen::Index h = wh.rows();
  Matrix<T> dpre = Matrix<T>::Zero(x.rows(), 4 * h);
  Matrix<T> dh = dh_last;
  Matrix<T> dc = Matrix<T>::Zero(1, h);
  Matrix<T> dz(1, 4 * h);
  for (int s = steps - 1; s >= 0; --s) {
    for (Eigen::Index j = 0; j < h; ++j) {
      const T i = tape.gates(s, j), f = tape.gates(s, h + j), g = tape.gates(s, 2 * h + j),
              o = tape.gates(s, 3 * h + j);
      const T ct = tape.cell_tanh(s, j);
      const T c_prev = s > 0 ? tape.cell(s - 1, j) : T(0);
      const T dcj = dc(0, j) + dh(0, j) * o * (T(1) - ct * ct);
      dz(0, j) = dcj * g * i * (T(1) - i);
      dz(0, h + j) = dcj * c_prev * f * (T(1) - f);
      dz(0, 2 * h + j) = dcj * i * (T(1) - g * g);
      dz(0, 3 * h + j) = dh(0, j) * ct * o * (T(1) - o);
      dc(0, j) = dcj * f;
    }
    dpre.row(tape.order[static_cast<std::size_t>(s)]) = dz;
    if (s > 0) dwh.noalias() += tape.hidden.row(s - 1).transpose() * dz;
    dh = dz * wh.transpose();
  }
  dwx.noalias() += x.transpose() * dpre;
  db += dpre.colwise().sum();
}

template <typename T>
struct LstmTape {
  DirectionTape<T> fwd, bwd;
  Matrix<T> features;
};

template <typename T>
Matrix<T> forward_impl(const Matrix<T>& window, const LstmParams<T>& p, LstmTape<T>& tape) {
  const auto& c = p.config;
  if (window.rows() != c.seq_len || window.cols() != c.input) {
    throw ShapeError("lstm window must be " + std::to_string(c.seq_len) + " x " + std::to_string(c.input));
  }
  run_direction(window, p.fwd_input_weight, p.fwd_recurrent_weight, p.fwd_bias, false, tape.fwd);
  run_direction(window, p.bwd_input_weight, p.bwd_recurrent_weight, p.bwd_bias, true, tape.bwd);
  tape.features.resize(1, 2 * c.hidden);
  tape.features.leftCols(c.hidden) = tape.fwd.hidden.row(c.seq_len - 1);
  tape.features.rightCols(c.hidden) = tape.bwd.hidden.row(c.seq_len - 1);
  Matrix<T> logits = tape.features * p.head_weight;
  detail::add_bias(logits, p.head_bias);
  return logits;
}

}  // namespace

template <typename T>
Matrix<T> lstm_logits(const Matrix<T>& window, const LstmParams<T>& params) {
  LstmTape<T> tape;
  return forward_impl(window, params, tape);
}

template <typename T>
Matrix<T> lstm_classify(const Matrix<T>& window, const LstmParams<T>& params) {
  Matrix<T> probs = lstm_logits(window, params);
  detail::softmax_rows(probs);
  return probs;
}

template <typename T>
T lstm_backward(const Matrix<T>& window, int label, const LstmParams<T>& p, LstmParams<T>& g, T loss_scale) {
  const auto& c = p.config;
  if (label < 0 || label >= c.classes) throw DomainError("label out of range");
  LstmTape<T> tape;
  Matrix<T> probs = forward_impl(window, p, tape);
  detail::softmax_rows(probs);
  const T loss = -std::log(probs(0, label));

  const Matrix<T> dlogits = detail::cross_entropy_grad(probs, label, loss_scale);
  g.head_weight.noalias() += tape.features.transpose() * dlogits;
  g.head_bias += dlogits;
  const Matrix<T> dfeat = dlogits * p.head_weight.transpose();
  direction_backward<T>(window, p.fwd_recurrent_weight, tape.fwd, dfeat.leftCols(c.hidden), g.fwd_input_weight,
                        g.fwd_recurrent_weight, g.fwd_bias);
  direction_backward<T>(window, p.bwd_recurrent_weight, tape.bwd, dfeat.rightCols(c.hidden), g.bwd_input_weight,
                        g.bwd_recurrent_weight, g.bwd_bias);
  return loss;
}

#define TACTILE_INSTANTIATE_LSTM(T)                                                                 \
  template struct LstmParams<T>;                                                                    \
  template LstmParams<T> init_lstm<T>(const LstmConfig&, std::uint64_t);                            \
  template Matrix<T> lstm_logits<T>(const Matrix<T>&, const LstmParams<T>&);                        \
  template Matrix<T> lstm_classify<T>(const Matrix<T>&, const LstmParams<T>&);                      \
  template T lstm_backward<T>(const Matrix<T>&, int, const LstmParams<T>&, LstmParams<T>&, T);

TACTILE_INSTANTIATE_LSTM(float)
TACTILE_INSTANTIATE_LSTM(double)

}  // namespace tactile::model
