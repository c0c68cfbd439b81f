#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tactile::model {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
bool all_finite(const Matrix<T>& m) {
  return m.allFinite();
}

/// Uniform(-limit, limit) fill. Draws in double so float and double parameter sets
/// initialized from the same seed agree to float rounding.
template <typename T>
void fill_uniform(Matrix<T>& m, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(dist(rng));
}

/// Flat list of (name, tensor) views over a parameter struct that exposes `visit`.
template <typename T>
struct TensorRef {
  std::string_view name;
  Matrix<T>* tensor;
};

template <typename Params>
auto tensor_list(Params& p) {
  using T = typename Params::Scalar;
  std::vector<TensorRef<T>> out;
  p.visit([&](std::string_view name, Matrix<T>& m) { out.push_back({name, &m}); });
  return out;
}

template <typename Params>
std::size_t parameter_count(const Params& p) {
  std::size_t n = 0;
  p.visit([&](std::string_view, const auto& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

/// Same shapes and config, all tensors zero. Used for gradient accumulators.
template <typename Params>
Params zeros_like(const Params& p) {
  Params out = p;
  out.visit([](std::string_view, auto& m) { m.setZero(); });
  return out;
}

template <typename To, typename Params>
auto cast_params(const Params& p) {
  using From = typename Params::Scalar;
  using Out = typename Params::template Rebind<To>;
  std::vector<const Matrix<From>*> src;
  p.visit([&](std::string_view, const Matrix<From>& m) { src.push_back(&m); });
  Out out = Out::shaped(p.config);
  std::size_t i = 0;
  out.visit([&](std::string_view, Matrix<To>& m) { m = src[i++]->template cast<To>(); });
  return out;
}

}  // namespace tactile::model
