#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tactile/signal/frame.hpp"

namespace tactile::skin {

// Record layout, little-endian:
//   0xA5 0x5A | u32 seq | u64 timestamp_us | 100 x u16 counts | u16 CRC-16/CCITT-FALSE
// The CRC covers seq, timestamp and counts.
inline constexpr std::uint8_t kMagic0 = 0xA5;
inline constexpr std::uint8_t kMagic1 = 0x5A;
inline constexpr std::size_t kPayloadBytes = 4 + 8 + 2 * kChannels;
inline constexpr std::size_t kRecordBytes = 2 + kPayloadBytes + 2;
static_assert(kRecordBytes == 216);

std::uint16_t crc16_ccitt(std::span<const std::uint8_t> bytes);

void encode_frame(const RawFrame& frame, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> encode_wire(std::span<const RawFrame> frames);

struct DecodeStats {
  std::size_t frames = 0;
  std::size_t crc_failures = 0;   // records with valid magic and bad CRC
  std::size_t skipped_bytes = 0;  // bytes not belonging to an accepted record
  std::size_t partial_tail = 0;   // bytes of an incomplete record at end of input

  friend bool operator==(const DecodeStats&, const DecodeStats&) = default;
};

/// Incremental decoder. Bytes may arrive in arbitrary chunks; corrupted records
/// are dropped and the decoder resynchronizes on the next magic.
class WireDecoder {
 public:
  /// Appends decoded frames to `out`.
  void feed(std::span<const std::uint8_t> bytes, std::vector<RawFrame>& out);
  /// Accounts for any buffered incomplete record and resets the buffer.
  void finish();

  const DecodeStats& stats() const noexcept { return stats_; }

 private:
  std::vector<std::uint8_t> buffer_;
  DecodeStats stats_;
};

struct DecodeResult {
  std::vector<RawFrame> frames;
  DecodeStats stats;
};

/// Accepts arbitrary bytes; never throws on malformed input.
DecodeResult decode_wire(std::span<const std::uint8_t> bytes);

/// .skn capture files are a plain concatenation of wire records.
void write_capture(const std::filesystem::path& path, std::span<const RawFrame> frames);
DecodeResult read_capture(const std::filesystem::path& path);

}  // namespace tactile::skin
