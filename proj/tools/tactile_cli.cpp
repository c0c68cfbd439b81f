// tactile: command-line front end for the gesture stack.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <random>
#include <spdlog/spdlog.h>
#include <string>
#include <thread>
#include <vector>

#include "tactile/data/dataset.hpp"
#include "tactile/data/recording.hpp"
#include "tactile/error.hpp"
#include "tactile/model/classifier.hpp"
#include "tactile/model/train.hpp"
#include "tactile/service/config.hpp"
#include "tactile/service/scenario.hpp"
#include "tactile/service/server.hpp"
#include "tactile/service/session.hpp"
#include "tactile/skin/wire.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tactile;

namespace {

// Exit codes.
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitData = 4;
constexpr int kExitNumeric = 5;
constexpr int kExitBound = 6;  // bench latency bound exceeded

struct GenerateArgs {
  fs::path out = "captures";
  int per_class = 10;
  std::uint64_t seed = 1;
  std::string sequence;
  double sigma = 0.02;
  double drift = 0.01;
};

struct AugmentArgs {
  fs::path manifest;
  fs::path out = "dataset.tds";
  std::size_t n = 100;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct TrainArgs {
  fs::path data;
  fs::path out = "model.twt";
  std::string arch = "hybrid";
  model::TrainConfig cfg;
  double target = 0.0;
};

struct EvalArgs {
  fs::path weights;
  fs::path data;
  std::string split = "validation";
};

struct BenchArgs {
  std::optional<fs::path> weights;
  std::string arch = "hybrid";
  int windows = 1000;
  double max_ms = 50.0;
  std::uint64_t seed = 1;
};

struct ReplayArgs {
  fs::path capture;
  std::optional<fs::path> weights;
  std::optional<fs::path> config;
  std::optional<fs::path> out;
  std::optional<std::uint32_t> input_rate;
};

struct ServeArgs {
  std::optional<fs::path> weights;
  std::optional<fs::path> config;
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;
  std::optional<fs::path> log;
};

int run_generate(const GenerateArgs& a) {
  skin::NoiseModel noise;
  noise.gaussian_sigma = a.sigma;
  noise.drift_rate = a.drift;
  if (!a.sequence.empty()) {
    const auto frames = service::render_scenario(service::parse_scenario(a.sequence), a.seed, noise);
    if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
    skin::write_capture(a.out, frames);
    spdlog::info("wrote {} frames to {}", frames.size(), a.out.string());
    return 0;
  }
  if (a.per_class < 1) throw ConfigError("--per-class must be at least 1");
  fs::create_directories(a.out);
  ordered_json manifest;
  manifest["seed"] = a.seed;
  manifest["recordings"] = ordered_json::array();
  for (GestureClass c : kAllClasses) {
    for (int i = 0; i < a.per_class; ++i) {
      const auto raw = data::synthesize_raw(c, data::recording_seed(a.seed, c, i), noise);
      const std::string file = std::string(to_string(c)) + "_" + std::to_string(i) + ".skn";
      skin::write_capture(a.out / file, raw.frames);
      ordered_json entry;
      entry["file"] = file;
      entry["label"] = std::string(to_string(c));
      entry["contact_begin"] = raw.contact.begin;
      entry["contact_end"] = raw.contact.end;
      manifest["recordings"].push_back(std::move(entry));
    }
  }
  std::ofstream(a.out / "manifest.json") << manifest.dump(2) << '\n';
  spdlog::info("wrote {} captures to {}", manifest["recordings"].size(), a.out.string());
  return 0;
}

std::vector<data::Recording> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(LoadError::Kind::Io, "cannot open manifest " + path.string());
  std::vector<data::Recording> recs;
  try {
    const auto j = ordered_json::parse(in);
    for (const auto& e : j.at("recordings")) {
      const auto label = parse_gesture(e.at("label").get<std::string>());
      if (!label) throw LoadError(LoadError::Kind::Malformed, "unknown label in manifest");
      const auto decoded = skin::read_capture(path.parent_path() / e.at("file").get<std::string>());
      const data::FrameSpan contact{e.at("contact_begin").get<std::size_t>(), e.at("contact_end").get<std::size_t>()};
      recs.push_back(data::process_capture(decoded.frames, *label, contact));
    }
  } catch (const ordered_json::exception& e) {
    throw LoadError(LoadError::Kind::Malformed, std::string("bad manifest: ") + e.what());
  }
  return recs;
}

int run_augment(const AugmentArgs& a) {
  const auto recs = load_manifest(a.manifest);
  const auto ds = data::build_dataset(recs, a.n, a.seed, a.workers);
  data::save_dataset(ds, a.out);
  ordered_json j;
  j["recordings"] = recs.size();
  j["samples"] = ds.size();
  j["train"] = ds.count(data::Split::Train);
  j["validation"] = ds.count(data::Split::Validation);
  std::cout << j.dump() << '\n';
  return 0;
}

model::Architecture architecture(const std::string& name) {
  const auto arch = model::parse_architecture(name);
  if (!arch) throw ConfigError("unknown architecture '" + name + "' (hybrid|lstm)");
  return *arch;
}

int run_train(TrainArgs a) {
  const auto arch = architecture(a.arch);
  if (a.target > 0.0) a.cfg.target_accuracy = a.target;
  const auto ds = data::load_dataset(a.data);
  const auto result = model::train(ds, a.cfg, arch, [&](const model::EpochReport& r) {
    std::cout << model::to_record(r, arch) << std::endl;
  });
  model::save_params(result.model, a.out);
  spdlog::info("best epoch {} saved to {}", result.best_epoch, a.out.string());
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto m = model::load_params(a.weights);
  const auto ds = data::load_dataset(a.data);
  const auto split = a.split == "train" ? data::Split::Train : data::Split::Validation;
  const auto report = model::evaluate(m, ds, split);
  std::cout << model::format_confusion(report.confusion);
  std::printf("accuracy %.4f (%zu windows, %s split, %s)\n", report.accuracy, report.total, a.split.c_str(),
              std::string(model::to_string(model::architecture_of(m))).c_str());
  return 0;
}

int run_bench(const BenchArgs& a) {
  const model::Model m = a.weights ? model::load_params(*a.weights) : model::make_model(architecture(a.arch), a.seed);
  if (a.windows < 1) throw ConfigError("--windows must be at least 1");

  // Classifier latency on random windows.
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<float> noise(0.0f, 0.1f);
  std::vector<data::GestureWindow> windows(static_cast<std::size_t>(std::min(a.windows, 64)));
  for (auto& w : windows) std::generate(w.values.begin(), w.values.end(), [&] { return noise(rng); });
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(a.windows));
  volatile float sink = 0.0f;
  for (int i = 0; i < a.windows; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = model::classify(m, windows[static_cast<std::size_t>(i) % windows.size()]);
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + p[0];
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  std::sort(ms.begin(), ms.end());
  auto pct = [&](double q) { return ms[std::min(ms.size() - 1, static_cast<std::size_t>(q * static_cast<double>(ms.size())))]; };

  // Whole-pipeline tick cost over a short scripted session.
  auto cfg = service::default_config();
  const auto frames =
      service::render_scenario(service::parse_scenario("idle:500,TranslateZPos:1000,idle:500"), a.seed);
  service::Session session(m, cfg);
  double tick_total = 0.0;
  std::size_t ticks = 0;
  for (const auto& f : frames) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool emitted = session.push(f).has_value();
    const auto t1 = std::chrono::steady_clock::now();
    if (emitted) {
      tick_total += std::chrono::duration<double, std::milli>(t1 - t0).count();
      ++ticks;
    }
  }

  // Buffering between a touch and a decision: filter history, window history, one tick.
  const int buffer_frames = (kFilterWindow - 1) + (data::kWindowFrames - 1) + 1;

  ordered_json j;
  j["arch"] = std::string(model::to_string(model::architecture_of(m)));
  j["windows"] = a.windows;
  j["mean_ms"] = mean;
  j["p50_ms"] = pct(0.50);
  j["p99_ms"] = pct(0.99);
  j["max_ms"] = ms.back();
  j["bound_ms"] = a.max_ms;
  j["tick_mean_ms"] = ticks ? tick_total / static_cast<double>(ticks) : 0.0;
  j["pipeline_buffer_frames"] = buffer_frames;
  j["pipeline_buffer_ms"] = buffer_frames * 1000.0 / 200.0;
  j["pass"] = mean <= a.max_ms;
  std::cout << j.dump() << '\n';
  return mean <= a.max_ms ? 0 : kExitBound;
}

service::SessionConfig session_config(const std::optional<fs::path>& config, const std::optional<fs::path>& weights) {
  auto cfg = service::resolve_config(config);
  if (weights) cfg.weights = *weights;
  if (cfg.weights.empty()) throw ConfigError("no weights given (--weights or \"weights\" in the config)");
  return cfg;
}

int run_replay(const ReplayArgs& a) {
  auto cfg = session_config(a.config, a.weights);
  cfg.source = service::InputSource::Capture;
  cfg.capture = a.capture;
  if (a.input_rate) cfg.input_rate_hz = *a.input_rate;
  const auto result = service::run_session(cfg);
  std::ofstream file;
  if (a.out) {
    file.open(*a.out, std::ios::binary);
    if (!file) throw LoadError(LoadError::Kind::Io, "cannot write " + a.out->string());
  }
  std::ostream& os = a.out ? static_cast<std::ostream&>(file) : std::cout;
  for (const auto& ev : result.events) os << service::to_record(ev) << '\n';
  spdlog::info("{} events, {} dropped frames", result.events.size(), result.dropped_frames);
  return 0;
}

service::Server* g_server = nullptr;

int run_serve(const ServeArgs& a) {
  auto cfg = session_config(a.config, a.weights);
  cfg.source = service::InputSource::Live;
  service::ServeOptions options;
  options.address = a.address;
  options.port = a.port;
  service::Server server(model::load_params(cfg.weights), cfg, options);
  std::ofstream log;
  if (a.log) {
    log.open(*a.log, std::ios::binary | std::ios::app);
    if (!log) throw LoadError(LoadError::Kind::Io, "cannot write " + a.log->string());
    server.set_event_sink([&log](const std::string& record) { log << record << '\n'; });
  }
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.run();
  g_server = nullptr;
  return 0;
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "tactile: " << kind << " error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile gesture stack: synthesize, train, evaluate, replay and serve"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tactile 0.1.0");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Synthesize per-class captures (or one scripted sequence)");
  generate->add_option("-o,--out", gen.out, "Output directory (or .skn file with --sequence)");
  generate->add_option("--per-class", gen.per_class, "Recordings per class, all 15 classes");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--sequence", gen.sequence, "Scenario, e.g. idle:500,TranslateZPos:1000,idle:500");
  generate->add_option("--noise-sigma", gen.sigma);
  generate->add_option("--drift", gen.drift, "Common-mode drift per second");

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "Build an augmented dataset from a capture manifest");
  augment->add_option("-m,--manifest", aug.manifest)->required()->check(CLI::ExistingFile);
  augment->add_option("-o,--out", aug.out);
  augment->add_option("-n,--per-recording", aug.n, "Augmented windows per recording");
  augment->add_option("--seed", aug.seed);
  augment->add_option("--workers", aug.workers)->check(CLI::Range(1u, 256u));

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a classifier; prints one JSON record per epoch");
  train->add_option("-d,--data", tr.data)->required()->check(CLI::ExistingFile);
  train->add_option("-o,--out", tr.out);
  train->add_option("--arch", tr.arch, "hybrid|lstm");
  train->add_option("--epochs", tr.cfg.epochs);
  train->add_option("--batch", tr.cfg.batch_size);
  train->add_option("--lr", tr.cfg.learning_rate);
  train->add_option("--seed", tr.cfg.seed);
  train->add_option("--patience", tr.cfg.patience);
  train->add_option("--target-accuracy", tr.target, "Stop once validation accuracy reaches this");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Accuracy and confusion matrix of weights on a dataset");
  eval->add_option("-w,--weights", ev.weights)->required()->check(CLI::ExistingFile);
  eval->add_option("-d,--data", ev.data)->required()->check(CLI::ExistingFile);
  eval->add_option("--split", ev.split)->check(CLI::IsMember({"train", "validation"}));

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Classifier latency per 30-frame window");
  bench->add_option("-w,--weights", be.weights)->check(CLI::ExistingFile);
  bench->add_option("--arch", be.arch, "Used with fresh weights when --weights is absent");
  bench->add_option("--windows", be.windows);
  bench->add_option("--max-ms", be.max_ms, "Fail when the mean exceeds this");
  bench->add_option("--seed", be.seed);

  ReplayArgs rp;
  auto* replay = app.add_subcommand("replay", "Run a capture through the session; writes state records");
  replay->add_option("-c,--capture", rp.capture)->required()->check(CLI::ExistingFile);
  replay->add_option("-w,--weights", rp.weights)->check(CLI::ExistingFile);
  replay->add_option("--config", rp.config)->check(CLI::ExistingFile);
  replay->add_option("-o,--out", rp.out);
  replay->add_option("--input-rate", rp.input_rate, "Capture frame rate in Hz if not 200");

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "WebSocket session endpoint");
  serve->add_option("-w,--weights", sv.weights)->check(CLI::ExistingFile);
  serve->add_option("--config", sv.config)->check(CLI::ExistingFile);
  serve->add_option("--address", sv.address);
  serve->add_option("-p,--port", sv.port);
  serve->add_option("--log", sv.log, "Append state records to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*augment) return run_augment(aug);
    if (*train) return run_train(tr);
    if (*eval) return run_eval(ev);
    if (*bench) return run_bench(be);
    if (*replay) return run_replay(rp);
    if (*serve) return run_serve(sv);
  } catch (const ConfigError& e) {
    return report("config", e, kExitConfig);
  } catch (const LoadError& e) {
    return report("data", e, kExitData);
  } catch (const AugmentationError& e) {
    return report("data", e, kExitData);
  } catch (const DivergenceError& e) {
    return report("numeric", e, kExitNumeric);
  } catch (const NumericError& e) {
    return report("numeric", e, kExitNumeric);
  } catch (const std::exception& e) {
    return report("internal", e, kExitFailure);
  }
  return kExitFailure;
}
