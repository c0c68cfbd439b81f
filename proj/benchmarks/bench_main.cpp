#include <benchmark/benchmark.h>

#include <random>

#include "tactile/model/classifier.hpp"
#include "tactile/signal/filter.hpp"
#include "tactile/skin/render.hpp"
#include "tactile/skin/script.hpp"
#include "tactile/skin/wire.hpp"

using namespace tactile;

namespace {

data::GestureWindow random_window(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  data::GestureWindow w;
  for (auto& v : w.values) v = u(rng);
  return w;
}

void classify_latency(benchmark::State& state, model::Architecture arch) {
  const auto m = model::make_model(arch, 1);
  const auto w = random_window(2);
  for (auto _ : state) benchmark::DoNotOptimize(model::classify(m, w));
}

void BM_ClassifyHybrid(benchmark::State& s) { classify_latency(s, model::Architecture::Hybrid); }
void BM_ClassifyLstm(benchmark::State& s) { classify_latency(s, model::Architecture::Lstm); }

void BM_HybridTrainStep(benchmark::State& state) {
  const auto p = model::init_hybrid<float>(model::HybridConfig{}, 1);
  auto g = model::zeros_like(p);
  const auto w = model::to_matrix(random_window(3));
  for (auto _ : state) benchmark::DoNotOptimize(model::hybrid_backward<float>(w, 4, p, g));
}

std::vector<RawFrame> some_frames() {
  return skin::render(skin::script_for(GestureClass::RotateXPos, 5), skin::NoiseModel{});
}

void BM_WireEncode(benchmark::State& state) {
  const auto frames = some_frames();
  for (auto _ : state) benchmark::DoNotOptimize(skin::encode_wire(frames));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(frames.size()));
}

void BM_WireDecode(benchmark::State& state) {
  const auto bytes = skin::encode_wire(some_frames());
  for (auto _ : state) {
    skin::WireDecoder d;
    std::vector<RawFrame> out;
    d.feed(bytes, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<long>(bytes.size()));
}

}  // namespace

BENCHMARK(BM_ClassifyHybrid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyLstm)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HybridTrainStep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WireEncode);
BENCHMARK(BM_WireDecode);
BENCHMARK_MAIN();
