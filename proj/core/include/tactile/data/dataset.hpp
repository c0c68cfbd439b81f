#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tactile/data/augment.hpp"

namespace tactile::data {

enum class Split : std::uint8_t { Train = 0, Validation = 1 };

struct Dataset {
  std::vector<Sample> samples;
  std::vector<Split> split;  // parallel to samples
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t count(Split s) const;
  std::vector<std::size_t> indices(Split s) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline constexpr int kValidationPercent = 15;

/// Validation share of a class with n samples, rounded to nearest.
constexpr std::size_t validation_count(std::size_t n) { return (n * kValidationPercent + 50) / 100; }

/// Augments every recording, shuffles deterministically, and splits 85/15 per class.
/// Recordings are augmented with independent derived seeds, so the result does not
/// depend on `workers`.
Dataset build_dataset(std::span<const Recording> recordings, std::size_t n_per_rec, std::uint64_t seed,
                      unsigned workers = 1);

/// .tds format, little-endian:
///   "TDS1" | u32 version | u64 n | u64 seed | u32 frames (30) | u32 channels (100)
///   | f32[n * 30 * 100] | u8 labels[n] | u8 split[n] | u32 CRC-32 of everything before it
inline constexpr std::uint32_t kDatasetVersion = 1;

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
/// Throws LoadError (Truncated, VersionMismatch, Checksum, BadMagic, Malformed, Io).
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace tactile::data
