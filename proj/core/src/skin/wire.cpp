#include "tactile/skin/wire.hpp"

#include <algorithm>
#include <boost/crc.hpp>
#include <fstream>
#include <iterator>

#include "tactile/error.hpp"

namespace tactile::skin {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

RawFrame parse_payload(const std::uint8_t* p) {
  RawFrame f;
  f.seq = get_le<std::uint32_t>(p);
  f.timestamp_us = get_le<std::uint64_t>(p + 4);
  for (int c = 0; c < kChannels; ++c) f.counts[c] = get_le<std::uint16_t>(p + 12 + 2 * c);
  return f;
}

}  // namespace

std::uint16_t crc16_ccitt(std::span<const std::uint8_t> bytes) {
  boost::crc_ccitt_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return static_cast<std::uint16_t>(crc.checksum());
}

void encode_frame(const RawFrame& frame, std::vector<std::uint8_t>& out) {
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  const std::size_t payload_at = out.size();
  put_le(out, frame.seq);
  put_le(out, frame.timestamp_us);
  for (auto c : frame.counts) put_le(out, c);
  const auto crc = crc16_ccitt({out.data() + payload_at, kPayloadBytes});
  put_le(out, crc);
}

std::vector<std::uint8_t> encode_wire(std::span<const RawFrame> frames) {
  std::vector<std::uint8_t> out;
  out.reserve(frames.size() * kRecordBytes);
  for (const auto& f : frames) encode_frame(f, out);
  return out;
}

void WireDecoder::feed(std::span<const std::uint8_t> bytes, std::vector<RawFrame>& out) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  std::size_t pos = 0;
  const std::size_t size = buffer_.size();
  while (pos < size) {
    if (buffer_[pos] != kMagic0) {
      ++pos;
      ++stats_.skipped_bytes;
      continue;
    }
    if (pos + 1 >= size) break;  // need the second magic byte
    if (buffer_[pos + 1] != kMagic1) {
      ++pos;
      ++stats_.skipped_bytes;
      continue;
    }
    if (pos + kRecordBytes > size) break;  // wait for the rest of the record
    const std::uint8_t* payload = buffer_.data() + pos + 2;
    const auto expected = get_le<std::uint16_t>(payload + kPayloadBytes);
    if (crc16_ccitt({payload, kPayloadBytes}) != expected) {
      ++stats_.crc_failures;
      ++stats_.skipped_bytes;
      ++pos;  // resynchronize from the byte after this magic
      continue;
    }
    out.push_back(parse_payload(payload));
    ++stats_.frames;
    pos += kRecordBytes;
  }
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(pos));
}

void WireDecoder::finish() {
  stats_.partial_tail += buffer_.size();
  stats_.skipped_bytes += buffer_.size();
  buffer_.clear();
}

DecodeResult decode_wire(std::span<const std::uint8_t> bytes) {
  DecodeResult result;
  WireDecoder decoder;
  decoder.feed(bytes, result.frames);
  decoder.finish();
  result.stats = decoder.stats();
  return result;
}

void write_capture(const std::filesystem::path& path, std::span<const RawFrame> frames) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open capture for writing: " + path.string());
  const auto bytes = encode_wire(frames);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing capture: " + path.string());
}

DecodeResult read_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::Io, "cannot open capture: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wire(bytes);
}

}  // namespace tactile::skin
