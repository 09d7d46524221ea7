#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "adba/net.hpp"
#include "adba/oracle.hpp"

namespace adba {

inline constexpr int kProtocolVersion = 1;

/// Wire framing for the hard-label model protocol.
///
///   client: HELLO 1\n                   server: MODEL <N> <K>\n
///   client: QUERY <id> <N>\n + 4N bytes  server: LABEL <id> <class>\n
///                                        or     ERR <id> <text>\n
///
/// Pixels travel as 32-bit little-endian IEEE-754 floats.
namespace wire {

std::string encode_pixels(std::span<const double> image);
std::vector<double> decode_pixels(std::string_view bytes);

std::string hello_line();
std::string model_line(std::size_t n, std::uint32_t k);
std::string query_header(std::uint64_t request_id, std::size_t n);
std::string label_line(std::uint64_t request_id, std::uint32_t class_id);
std::string error_line(std::uint64_t request_id, std::string_view text);

struct ModelInfo {
  std::size_t dimension = 0;
  std::uint32_t class_count = 0;
};
ModelInfo parse_model_line(std::string_view line);

/// Parses a LABEL or ERR reply to request_id. Throws ProtocolError on ERR,
/// a mismatched id, or a malformed line.
std::uint32_t parse_label_reply(std::string_view line, std::uint64_t request_id);

}  // namespace wire

/// Oracle that forwards every query to a model server over TCP.
class RemoteOracle : public Oracle {
 public:
  /// Connects and handshakes. Throws ProtocolError when unreachable and
  /// HandshakeMismatch when the server's N or K differs from the expected.
  RemoteOracle(const std::string& address, std::size_t dimension, std::uint32_t class_count,
               std::uint64_t budget);

 protected:
  Label classify(std::span<const double> image) override;

 private:
  net::Socket socket_;
  std::uint64_t next_request_ = 1;
  bool broken_ = false;
};

/// Serves a classifier over the wire protocol, one thread per connection.
class ModelServer {
 public:
  using Classifier = std::function<std::uint32_t(std::span<const double>)>;

  /// The classifier must be safe to call from several threads at once.
  ModelServer(std::size_t dimension, std::uint32_t class_count, Classifier classify,
              std::uint16_t port = 0);
  ~ModelServer();

  ModelServer(const ModelServer&) = delete;
  ModelServer& operator=(const ModelServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::string address() const { return "127.0.0.1:" + std::to_string(port_); }
  std::uint64_t queries_served() const noexcept { return served_.load(); }

  void stop();

 private:
  void accept_loop();
  void serve_connection(net::Socket& conn);

  std::size_t dimension_;
  std::uint32_t class_count_;
  Classifier classify_;
  net::Socket listener_;
  std::uint16_t port_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> served_{0};
  std::mutex connections_mutex_;
  std::list<net::Socket> connections_;
  std::vector<std::thread> workers_;
  std::thread acceptor_;
};

}  // namespace adba
