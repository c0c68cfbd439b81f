#include "tactile/data/dataset.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <thread>

#include "../binary_io.hpp"
#include "tactile/error.hpp"

namespace tactile::data {

std::size_t Dataset::count(Split s) const { return static_cast<std::size_t>(std::count(split.begin(), split.end(), s)); }

std::vector<std::size_t> Dataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s) out.push_back(i);
  }
  return out;
}

Dataset build_dataset(std::span<const Recording> recordings, std::size_t n_per_rec, std::uint64_t seed,
                      unsigned workers) {
  if (recordings.empty()) throw AugmentationError("build_dataset: no recordings");

  std::vector<std::vector<Sample>> parts(recordings.size());
  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t r = first; r < recordings.size(); r += stride) {
      parts[r] = augment_recording(recordings[r], n_per_rec, derive_seed(seed, r));
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Dataset ds;
  ds.seed = seed;
  ds.samples.reserve(recordings.size() * n_per_rec);
  for (auto& part : parts) {
    std::move(part.begin(), part.end(), std::back_inserter(ds.samples));
    part.clear();
    part.shrink_to_fit();
  }

  std::mt19937_64 rng(derive_seed(seed, ~0ULL));
  std::shuffle(ds.samples.begin(), ds.samples.end(), rng);

  // Stratified split: the first validation_count(n_c) samples of each class (in
  // shuffled order) go to validation.
  std::array<std::size_t, kNumClasses> per_class{};
  for (const auto& s : ds.samples) ++per_class[static_cast<std::size_t>(index_of(s.label))];
  std::array<std::size_t, kNumClasses> taken{};
  ds.split.resize(ds.samples.size(), Split::Train);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto c = static_cast<std::size_t>(index_of(ds.samples[i].label));
    if (taken[c] < validation_count(per_class[c])) {
      ds.split[i] = Split::Validation;
      ++taken[c];
    }
  }
  return ds;
}

namespace {
constexpr std::array<char, 4> kMagic = {'T', 'D', 'S', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 4 + 4;
}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  detail::ByteWriter w;
  for (char c : kMagic) w.put(c);
  w.put(kDatasetVersion);
  w.put(static_cast<std::uint64_t>(ds.samples.size()));
  w.put(ds.seed);
  w.put(static_cast<std::uint32_t>(kWindowFrames));
  w.put(static_cast<std::uint32_t>(kChannels));
  for (const auto& s : ds.samples) w.put_array(std::span<const float>(s.window.values));
  for (const auto& s : ds.samples) w.put(static_cast<std::uint8_t>(s.label));
  for (auto sp : ds.split) w.put(static_cast<std::uint8_t>(sp));
  w.put_crc();
  w.write_file(path);
}

Dataset load_dataset(const std::filesystem::path& path) {
  using Kind = LoadError::Kind;
  const auto file = detail::read_file(path);
  detail::ByteReader header(file);
  std::array<char, 4> magic{};
  for (auto& c : magic) c = header.get<char>();
  if (magic != kMagic) throw LoadError(Kind::BadMagic, "not a .tds dataset");
  const auto version = header.get<std::uint32_t>();
  if (version != kDatasetVersion) {
    throw LoadError(Kind::VersionMismatch, "unsupported dataset version " + std::to_string(version));
  }
  const auto n = header.get<std::uint64_t>();
  const auto seed = header.get<std::uint64_t>();
  const auto frames = header.get<std::uint32_t>();
  const auto channels = header.get<std::uint32_t>();
  if (frames != kWindowFrames || channels != kChannels) throw LoadError(Kind::Malformed, "unexpected window shape");

  const std::size_t per_sample = sizeof(float) * kWindowValues + 2;
  if (n > (file.size() - kHeaderBytes) / per_sample + 1) throw LoadError(Kind::Truncated, "dataset truncated");
  const std::size_t expected = kHeaderBytes + n * per_sample + 4;
  if (file.size() < expected) throw LoadError(Kind::Truncated, "dataset truncated");
  if (file.size() > expected) throw LoadError(Kind::Malformed, "trailing bytes after dataset");

  detail::ByteReader body(detail::checked_body(file));
  body.skip(kHeaderBytes);

  Dataset ds;
  ds.seed = seed;
  ds.samples.resize(n);
  ds.split.resize(n);
  for (auto& s : ds.samples) body.get_array(std::span<float>(s.window.values));
  for (auto& s : ds.samples) {
    const auto label = body.get<std::uint8_t>();
    if (label >= kNumClasses) throw LoadError(Kind::Malformed, "label out of range");
    s.label = static_cast<GestureClass>(label);
  }
  for (auto& sp : ds.split) {
    const auto v = body.get<std::uint8_t>();
    if (v > 1) throw LoadError(Kind::Malformed, "split tag out of range");
    sp = static_cast<Split>(v);
  }
  return ds;
}

}  // namespace tactile::data
