#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace adba::net {

/// Owning TCP socket with blocking line and exact-length reads.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();

  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  static Socket connect(const std::string& host, std::uint16_t port);
  /// Listens on 127.0.0.1; port 0 picks an ephemeral port.
  static Socket listen(std::uint16_t port);

  Socket accept() const;
  std::uint16_t local_port() const;

  void write_all(std::string_view bytes) const;
  /// Reads through the next '\n' (not included). Throws ProtocolError on EOF
  /// or when the line exceeds max_length.
  std::string read_line(std::size_t max_length = 4096);
  std::string read_exact(std::size_t count);

  bool valid() const noexcept { return fd_ >= 0; }
  void close() noexcept;
  /// Unblocks a thread sitting in accept() or read on this socket.
  void shutdown() noexcept;

 private:
  void fill();

  int fd_ = -1;
  std::string buffer_;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// Parses "host:port".
Endpoint parse_endpoint(std::string_view address);

}  // namespace adba::net
