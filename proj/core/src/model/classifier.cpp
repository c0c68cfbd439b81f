#include "tactile/model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "../binary_io.hpp"
#include "tactile/error.hpp"

namespace tactile::model {

std::string_view to_string(Architecture a) noexcept {
  switch (a) {
    case Architecture::Hybrid: return "hybrid";
    case Architecture::Lstm: return "lstm";
  }
  return "?";
}

std::optional<Architecture> parse_architecture(std::string_view name) noexcept {
  if (name == "hybrid") return Architecture::Hybrid;
  if (name == "lstm") return Architecture::Lstm;
  return std::nullopt;
}

Architecture architecture_of(const Model& m) noexcept {
  return std::holds_alternative<HybridParams<float>>(m) ? Architecture::Hybrid : Architecture::Lstm;
}

Model make_model(Architecture arch, std::uint64_t seed) {
  if (arch == Architecture::Hybrid) return init_hybrid<float>(HybridConfig{}, seed);
  return init_lstm<float>(LstmConfig{}, seed);
}

Matrix<float> to_matrix(const data::GestureWindow& window) {
  return Eigen::Map<const Matrix<float>>(window.values.data(), data::kWindowFrames, kChannels);
}

Probabilities classify(const Model& model, const data::GestureWindow& window) {
  const Matrix<float> x = to_matrix(window);
  const Matrix<float> probs = std::visit(
      [&](const auto& p) -> Matrix<float> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HybridParams<float>>) {
          return hybrid_classify(x, p);
        } else {
          return lstm_classify(x, p);
        }
      },
      model);
  if (probs.cols() != kNumClasses) throw ShapeError("model is not a 15-class classifier");
  Probabilities out;
  std::copy(probs.data(), probs.data() + kNumClasses, out.begin());
  return out;
}

GestureClass argmax(const Probabilities& p) noexcept {
  return static_cast<GestureClass>(std::distance(p.begin(), std::max_element(p.begin(), p.end())));
}

double cross_entropy(std::span<const float> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) throw DomainError("label out of range");
  return -std::log(static_cast<double>(probs[static_cast<std::size_t>(label)]));
}

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'W', 'T', '1'};

std::vector<std::int32_t> dims_of(const HybridConfig& c) {
  return {c.height, c.width, c.conv1_channels, c.conv2_channels, c.d_model, c.heads,
          c.ffn,    c.layers, c.seq_len,       c.head_hidden,    c.classes};
}

std::vector<std::int32_t> dims_of(const LstmConfig& c) { return {c.input, c.hidden, c.seq_len, c.classes}; }

HybridConfig hybrid_config(const std::vector<std::int32_t>& d) {
  if (d.size() != 11) throw LoadError(LoadError::Kind::Malformed, "bad hybrid descriptor");
  return {d[0], d[1], d[2], d[3], d[4], d[5], d[6], d[7], d[8], d[9], d[10]};
}

LstmConfig lstm_config(const std::vector<std::int32_t>& d) {
  if (d.size() != 4) throw LoadError(LoadError::Kind::Malformed, "bad lstm descriptor");
  return {d[0], d[1], d[2], d[3]};
}

template <typename Params>
void read_tensors(detail::ByteReader& r, Params& p) {
  const auto n = r.get<std::uint32_t>();
  auto tensors = tensor_list(p);
  if (n != tensors.size()) throw LoadError(LoadError::Kind::Malformed, "tensor count does not match architecture");
  for (auto& t : tensors) {
    const auto name = r.get_string();
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    if (name != t.name || rows != t.tensor->rows() || cols != t.tensor->cols()) {
      throw LoadError(LoadError::Kind::Malformed, "unexpected tensor " + name);
    }
    r.get_array(std::span<float>(t.tensor->data(), static_cast<std::size_t>(t.tensor->size())));
  }
}

}  // namespace

void save_params(const Model& model, const std::filesystem::path& path) {
  detail::ByteWriter w;
  for (char c : kMagic) w.put(c);
  w.put(kWeightsVersion);
  w.put(static_cast<std::uint32_t>(architecture_of(model)));
  std::visit(
      [&](const auto& p) {
        const auto dims = dims_of(p.config);
        w.put(static_cast<std::uint32_t>(dims.size()));
        for (auto d : dims) w.put(d);
        std::uint32_t n = 0;
        p.visit([&](std::string_view, const Matrix<float>&) { ++n; });
        w.put(n);
        p.visit([&](std::string_view name, const Matrix<float>& m) {
          w.put_string(std::string(name));
          w.put(static_cast<std::uint32_t>(m.rows()));
          w.put(static_cast<std::uint32_t>(m.cols()));
          w.put_array(std::span<const float>(m.data(), static_cast<std::size_t>(m.size())));
        });
      },
      model);
  w.put_crc();
  w.write_file(path);
}

Model load_params(const std::filesystem::path& path) {
  using Kind = LoadError::Kind;
  const auto file = detail::read_file(path);
  detail::ByteReader header(file);
  std::array<char, 4> magic{};
  for (auto& c : magic) c = header.get<char>();
  if (magic != kMagic) throw LoadError(Kind::BadMagic, "not a .twt weight file");
  const auto version = header.get<std::uint32_t>();
  if (version != kWeightsVersion) throw LoadError(Kind::VersionMismatch, "unsupported weights version");

  detail::ByteReader r(detail::checked_body(file));
  r.skip(8);
  const auto arch = r.get<std::uint32_t>();
  const auto n_dims = r.get<std::uint32_t>();
  if (n_dims > 64) throw LoadError(Kind::Malformed, "bad architecture descriptor");
  std::vector<std::int32_t> dims(n_dims);
  r.get_array(std::span<std::int32_t>(dims));

  try {
    if (arch == static_cast<std::uint32_t>(Architecture::Hybrid)) {
      auto p = HybridParams<float>::shaped(hybrid_config(dims));
      read_tensors(r, p);
      return p;
    }
    if (arch == static_cast<std::uint32_t>(Architecture::Lstm)) {
      auto p = LstmParams<float>::shaped(lstm_config(dims));
      read_tensors(r, p);
      return p;
    }
  } catch (const ConfigError& e) {
    throw LoadError(Kind::Malformed, std::string("invalid architecture descriptor: ") + e.what());
  }
  throw LoadError(Kind::Malformed, "unknown architecture tag " + std::to_string(arch));
}

Model load_params(const std::filesystem::path& path, Architecture expected) {
  Model m = load_params(path);
  if (architecture_of(m) != expected) {
    throw LoadError(LoadError::Kind::ArchitectureMismatch,
                    "weight file holds a " + std::string(to_string(architecture_of(m))) + " model, expected " +
                        std::string(to_string(expected)));
  }
  return m;
}

}  // namespace tactile::model
