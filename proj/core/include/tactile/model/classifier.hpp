#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <variant>

#include "tactile/data/augment.hpp"
#include "tactile/gesture.hpp"
#include "tactile/model/hybrid.hpp"
#include "tactile/model/lstm.hpp"

namespace tactile::model {

enum class Architecture : std::uint32_t { Hybrid = 1, Lstm = 2 };

std::string_view to_string(Architecture a) noexcept;
std::optional<Architecture> parse_architecture(std::string_view name) noexcept;

/// A trained (or initialized) single-precision classifier of either architecture.
using Model = std::variant<HybridParams<float>, LstmParams<float>>;

Architecture architecture_of(const Model& m) noexcept;

/// Production-shaped model with fresh weights.
Model make_model(Architecture arch, std::uint64_t seed);

using Probabilities = std::array<float, kNumClasses>;

/// Time-major window view as a 30 x 100 matrix.
Matrix<float> to_matrix(const data::GestureWindow& window);

/// Softmax over the 15 classes. Throws ShapeError if the model is not 15-way over 30 x 100 windows.
Probabilities classify(const Model& model, const data::GestureWindow& window);

GestureClass argmax(const Probabilities& p) noexcept;

/// -ln p[label].
double cross_entropy(std::span<const float> probs, int label);

/// .twt weight files, little-endian:
///   "TWT1" | u32 version | u32 architecture | u32 n_dims | i32 dims[n_dims]
///   | u32 n_tensors | { u32 name_len | name | u32 rows | u32 cols | f32 data } ...
///   | u32 CRC-32 of everything before it
inline constexpr std::uint32_t kWeightsVersion = 1;

void save_params(const Model& model, const std::filesystem::path& path);
/// Throws LoadError (Checksum, VersionMismatch, Truncated, BadMagic, Malformed, Io).
Model load_params(const std::filesystem::path& path);
/// As load_params, plus LoadError(ArchitectureMismatch) when the file holds another architecture.
Model load_params(const std::filesystem::path& path, Architecture expected);

}  // namespace tactile::model
