#include "tactile/service/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "tactile/error.hpp"
#include "tactile/service/resample.hpp"
#include "tactile/service/session.hpp"
#include "tactile/skin/wire.hpp"

namespace tactile::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::ordered_json;

namespace {

std::string reply(std::string_view type, std::string_view key, const ordered_json& value) {
  ordered_json j;
  j["v"] = kEventSchemaVersion;
  j["type"] = type;
  j[std::string(key)] = value;
  return j.dump();
}

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const model::Model& model, const SessionConfig& config, const ServeOptions& options,
             std::function<void(const std::string&)> sink, std::function<void()> on_close)
      : ws_(std::move(socket)),
        heartbeat_(ws_.get_executor()),
        underrun_(ws_.get_executor()),
        options_(options),
        config_(config),
        session_(model, config),
        resampler_(config.input_rate_hz),
        sink_(std::move(sink)),
        on_close_(std::move(on_close)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

  bool done() const noexcept { return closed_; }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return finish("handshake: " + ec.message());
    spdlog::info("client connected");
    arm_heartbeat();
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return finish(ec == websocket::error::closed ? "client closed" : ec.message());
    const auto data = buffer_.cdata();
    const std::span<const std::uint8_t> bytes(static_cast<const std::uint8_t*>(data.data()), data.size());
    if (ws_.got_binary()) {
      on_frames(bytes);
    } else {
      on_control(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
    buffer_.consume(buffer_.size());
    read();
  }

  void on_frames(std::span<const std::uint8_t> bytes) {
    const auto before = decoder_.stats();
    frames_.clear();
    decoder_.feed(bytes, frames_);
    const auto& after = decoder_.stats();
    if (frames_.empty() && (after.crc_failures != before.crc_failures || after.skipped_bytes != before.skipped_bytes)) {
      send(reply("error", "message", "no valid frame record in binary message"));
    }
    if (frames_.empty()) return;
    arm_underrun();
    for (const auto& f : frames_) {
      if (last_seq_ && f.seq > *last_seq_ + 1) seq_gaps_ += f.seq - *last_seq_ - 1;
      last_seq_ = f.seq;
      ticks_.clear();
      resampler_.push(f, ticks_);
      if (paused_) continue;
      for (const auto& t : ticks_) {
        if (auto ev = session_.push(t)) emit(to_record(*ev));
      }
    }
  }

  void on_control(std::string_view text) {
    ordered_json msg;
    try {
      msg = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
      return send(reply("error", "message", std::string("malformed control message: ") + e.what()));
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
      return send(reply("error", "message", "control message needs a string \"type\""));
    }
    const auto type = msg["type"].get<std::string>();
    try {
      if (type == "start") {
        paused_ = false;
      } else if (type == "stop") {
        if (!paused_ && session_.calibrated()) emit(to_record(session_.halt()));
        paused_ = true;
      } else if (type == "set-config") {
        apply_config(msg);
      } else {
        return send(reply("error", "message", "unknown control message type '" + type + "'"));
      }
    } catch (const std::exception& e) {
      return send(reply("error", "message", e.what()));
    }
    send(reply("ack", "command", type));
  }

  void apply_config(const ordered_json& msg) {
    SessionConfig c = config_;
    for (const auto& [key, value] : msg.items()) {
      if (key == "type") continue;
      if (!value.is_number()) throw ConfigError("set-config field '" + key + "' must be a number");
      if (key == "input_rate_hz") {
        if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0 || value.get<std::uint64_t>() > 100000) {
          throw ConfigError("input_rate_hz must be a positive integer");
        }
        c.input_rate_hz = value.get<std::uint32_t>();
      } else if (key == "dwell_ticks") {
        c.control.dwell_ticks = value.get<int>();
      } else if (key == "linear_speed") {
        c.control.profile.linear_speed = value.get<double>();
      } else if (key == "angular_speed") {
        c.control.profile.angular_speed = value.get<double>();
      } else if (key == "contact_threshold") {
        c.contact_threshold = value.get<double>();
      } else {
        throw ConfigError("unknown set-config field '" + key + "'");
      }
    }
    session_.reconfigure(c);
    if (c.input_rate_hz != config_.input_rate_hz) resampler_ = Resampler(c.input_rate_hz);
    config_ = c;
  }

  void arm_heartbeat() {
    heartbeat_.expires_after(options_.heartbeat);
    heartbeat_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      ordered_json j;
      j["v"] = kEventSchemaVersion;
      j["type"] = "heartbeat";
      j["ticks"] = self->session_.ticks();
      j["frames"] = self->resampler_.frames_in();
      j["dropped"] = self->decoder_.stats().crc_failures + self->seq_gaps_;
      j["calibrated"] = self->session_.calibrated();
      j["paused"] = self->paused_;
      j["underrun"] = self->underrun_active_;
      self->send(j.dump());
      self->arm_heartbeat();
    });
  }

  void arm_underrun() {
    underrun_active_ = false;
    underrun_.expires_after(options_.underrun);
    underrun_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      self->underrun_active_ = true;
      const auto& s = self->session_.state();
      if (s.active || s.aux_in_progress()) self->emit(to_record(self->session_.halt()));
      self->send(reply("diagnostic", "message", "input underrun; session paused until frames resume"));
    });
  }

  void emit(std::string record) {
    if (sink_) sink_(record);
    send(std::move(record));
  }

  void send(std::string text) {
    if (closed_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->finish("write: " + ec.message());
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  void finish(const std::string& why) {
    if (closed_) return;
    closed_ = true;
    spdlog::info("client disconnected ({})", why);
    queue_.clear();
    heartbeat_.cancel();
    underrun_.cancel();
    // Safety stop: the last record of a session always commands zero motion.
    if (session_.calibrated() && sink_) sink_(to_record(session_.halt()));
    close();
    if (on_close_) on_close_();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  asio::steady_timer heartbeat_;
  asio::steady_timer underrun_;
  const ServeOptions& options_;
  SessionConfig config_;
  Session session_;
  Resampler resampler_;
  skin::WireDecoder decoder_;
  std::vector<RawFrame> frames_;
  std::vector<RawFrame> ticks_;
  std::optional<std::uint32_t> last_seq_;
  std::uint64_t seq_gaps_ = 0;
  std::deque<std::string> queue_;
  bool paused_ = false;
  bool closed_ = false;
  bool underrun_active_ = false;
  std::function<void(const std::string&)> sink_;
  std::function<void()> on_close_;
};

}  // namespace

struct Server::Impl {
  Impl(model::Model m, SessionConfig c, ServeOptions o)
      : model(std::move(m)), config(std::move(c)), options(std::move(o)), acceptor(ioc) {
    config.validate();
    const tcp::endpoint endpoint(asio::ip::make_address(options.address), options.port);
    acceptor.open(endpoint.protocol());
    acceptor.set_option(asio::socket_base::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen();
  }

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec != asio::error::operation_aborted) spdlog::warn("accept: {}", ec.message());
        if (!acceptor.is_open()) return;
      } else if (auto current = active.lock(); current && !current->done()) {
        spdlog::warn("refusing second client");
        beast::error_code ignored;
        socket.close(ignored);
      } else {
        auto conn = std::make_shared<Connection>(std::move(socket), model, config, options, sink, [] {});
        active = conn;
        conn->start();
      }
      accept();
    });
  }

  model::Model model;
  SessionConfig config;
  ServeOptions options;
  asio::io_context ioc{1};
  tcp::acceptor acceptor;
  std::weak_ptr<Connection> active;
  std::function<void(const std::string&)> sink;
};

Server::Server(model::Model model, SessionConfig config, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(model), std::move(config), std::move(options))) {}

Server::~Server() = default;

std::uint16_t Server::port() const noexcept { return impl_->acceptor.local_endpoint().port(); }

void Server::set_event_sink(std::function<void(const std::string&)> sink) { impl_->sink = std::move(sink); }

void Server::run() {
  spdlog::info("serving on ws://{}:{}", impl_->options.address, port());
  impl_->accept();
  impl_->ioc.run();
  impl_->ioc.restart();
}

void Server::stop() {
  asio::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    if (auto conn = impl_->active.lock()) conn->close();
    impl_->ioc.stop();
  });
}

}  // namespace tactile::service
