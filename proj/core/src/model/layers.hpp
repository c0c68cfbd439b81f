#pragma once

// Shared building blocks for the hand-differentiated models.

#include <cmath>

#include "tactile/model/tensor.hpp"

namespace tactile::model::detail {

template <typename T>
using Column = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline constexpr double kLayerNormEps = 1e-5;

template <typename T>
void add_bias(Matrix<T>& y, const Matrix<T>& bias) {
  y.rowwise() += bias.row(0);
}

template <typename T>
void relu_inplace(Matrix<T>& x) {
  x = x.cwiseMax(T(0));
}

/// Zeroes gradient entries where the ReLU output was not positive.
template <typename T>
void relu_mask(Matrix<T>& grad, const Matrix<T>& activated) {
  grad = (activated.array() > T(0)).select(grad, T(0));
}

template <typename T>
void softmax_rows(Matrix<T>& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    const T m = row.maxCoeff();
    row = (row.array() - m).exp();
    row /= row.sum();
  }
}

template <typename T>
struct LayerNormCache {
  Matrix<T> xhat;
  Column<T> rstd;
};

template <typename T>
Matrix<T> layer_norm(const Matrix<T>& x, const Matrix<T>& gain, const Matrix<T>& bias, LayerNormCache<T>& cache) {
  const Eigen::Index n = x.rows(), d = x.cols();
  cache.xhat.resize(n, d);
  cache.rstd.resize(n);
  Matrix<T> y(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const T mu = x.row(i).mean();
    T var = T(0);
    for (Eigen::Index j = 0; j < d; ++j) var += (x(i, j) - mu) * (x(i, j) - mu);
    var /= static_cast<T>(d);
    const T rstd = T(1) / std::sqrt(var + static_cast<T>(kLayerNormEps));
    cache.rstd(i) = rstd;
    for (Eigen::Index j = 0; j < d; ++j) {
      const T xh = (x(i, j) - mu) * rstd;
      cache.xhat(i, j) = xh;
      y(i, j) = xh * gain(0, j) + bias(0, j);
    }
  }
  return y;
}

/// Returns dL/dx and accumulates gain/bias gradients.
template <typename T>
Matrix<T> layer_norm_backward(const Matrix<T>& dy, const Matrix<T>& gain, const LayerNormCache<T>& cache,
                              Matrix<T>& dgain, Matrix<T>& dbias) {
  const Eigen::Index n = dy.rows(), d = dy.cols();
  Matrix<T> dx(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    T mean_dxh = T(0), mean_dxh_xh = T(0);
    for (Eigen::Index j = 0; j < d; ++j) {
      const T dxh = dy(i, j) * gain(0, j);
      mean_dxh += dxh;
      mean_dxh_xh += dxh * cache.xhat(i, j);
      dgain(0, j) += dy(i, j) * cache.xhat(i, j);
      dbias(0, j) += dy(i, j);
    }
    mean_dxh /= static_cast<T>(d);
    mean_dxh_xh /= static_cast<T>(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const T dxh = dy(i, j) * gain(0, j);
      dx(i, j) = cache.rstd(i) * (dxh - mean_dxh - cache.xhat(i, j) * mean_dxh_xh);
    }
  }
  return dx;
}

/// Gradient of cross-entropy w.r.t. logits for softmax probabilities.
template <typename T>
Matrix<T> cross_entropy_grad(const Matrix<T>& probs, int label, T scale) {
  Matrix<T> d = probs * scale;
  d(0, label) -= scale;
  return d;
}

}  // namespace tactile::model::detail
