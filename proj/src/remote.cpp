#include "adba/remote.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

namespace adba {

namespace wire {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

template <typename T>
T parse_number(std::string_view word, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw ProtocolError("malformed " + std::string(what) + " '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

std::string encode_pixels(std::span<const double> image) {
  std::string bytes(image.size() * 4, '\0');
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(image[i]));
    for (int b = 0; b < 4; ++b) {
      bytes[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFFU);
    }
  }
  return bytes;
}

std::vector<double> decode_pixels(std::string_view bytes) {
  if (bytes.size() % 4 != 0) throw ProtocolError("pixel payload not a multiple of 4 bytes");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
    }
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

std::string hello_line() { return "HELLO " + std::to_string(kProtocolVersion) + "\n"; }

std::string model_line(std::size_t n, std::uint32_t k) {
  return "MODEL " + std::to_string(n) + " " + std::to_string(k) + "\n";
}

std::string query_header(std::uint64_t request_id, std::size_t n) {
  return "QUERY " + std::to_string(request_id) + " " + std::to_string(n) + "\n";
}

std::string label_line(std::uint64_t request_id, std::uint32_t class_id) {
  return "LABEL " + std::to_string(request_id) + " " + std::to_string(class_id) + "\n";
}

std::string error_line(std::uint64_t request_id, std::string_view text) {
  std::string clean(text);
  for (char& c : clean) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return "ERR " + std::to_string(request_id) + " " + clean + "\n";
}

ModelInfo parse_model_line(std::string_view line) {
  const auto words = split_words(line);
  if (words.size() != 3 || words[0] != "MODEL") {
    throw ProtocolError("expected MODEL <N> <K>, got '" + std::string(line) + "'");
  }
  return {parse_number<std::size_t>(words[1], "dimension"),
          parse_number<std::uint32_t>(words[2], "class count")};
}

std::uint32_t parse_label_reply(std::string_view line, std::uint64_t request_id) {
  const auto words = split_words(line);
  if (words.size() >= 2 && words[0] == "ERR") {
    const auto pos = line.find(words[1]) + words[1].size();
    throw ProtocolError("server error for request " + std::string(words[1]) + ":" +
                        std::string(line.substr(pos)));
  }
  if (words.size() != 3 || words[0] != "LABEL") {
    throw ProtocolError("expected LABEL <id> <class>, got '" + std::string(line) + "'");
  }
  if (parse_number<std::uint64_t>(words[1], "request id") != request_id) {
    throw ProtocolError("reply for request " + std::string(words[1]) + ", expected " +
                        std::to_string(request_id));
  }
  return parse_number<std::uint32_t>(words[2], "class id");
}

}  // namespace wire

RemoteOracle::RemoteOracle(const std::string& address, std::size_t dimension,
                           std::uint32_t class_count, std::uint64_t budget)
    : Oracle(dimension, class_count, budget) {
  const net::Endpoint ep = net::parse_endpoint(address);
  socket_ = net::Socket::connect(ep.host, ep.port);
  socket_.write_all(wire::hello_line());
  const wire::ModelInfo info = wire::parse_model_line(socket_.read_line());
  if (info.dimension != dimension || info.class_count != class_count) {
    throw HandshakeMismatch("server model is N=" + std::to_string(info.dimension) +
                            " K=" + std::to_string(info.class_count) + ", expected N=" +
                            std::to_string(dimension) + " K=" + std::to_string(class_count));
  }
}

Label RemoteOracle::classify(std::span<const double> image) {
  if (broken_) throw ProtocolError("connection unusable after an earlier failure");
  const std::uint64_t id = next_request_++;
  try {
    std::string frame = wire::query_header(id, image.size());
    frame += wire::encode_pixels(image);
    socket_.write_all(frame);
    return Label{wire::parse_label_reply(socket_.read_line(), id)};
  } catch (const ProtocolError&) {
    broken_ = true;
    throw;
  }
}

ModelServer::ModelServer(std::size_t dimension, std::uint32_t class_count, Classifier classify,
                         std::uint16_t port)
    : dimension_(dimension),
      class_count_(class_count),
      classify_(std::move(classify)),
      listener_(net::Socket::listen(port)),
      port_(listener_.local_port()) {
  acceptor_ = std::thread([this] { accept_loop(); });
}

ModelServer::~ModelServer() { stop(); }

void ModelServer::stop() {
  if (stopping_.exchange(true)) return;
  listener_.shutdown();
  {
    std::lock_guard lock(connections_mutex_);
    for (auto& conn : connections_) conn.shutdown();
  }
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& worker : workers_) {
    if (worker.joinable()) worker.join();
  }
  listener_.close();
}

void ModelServer::accept_loop() {
  while (!stopping_.load()) {
    net::Socket conn;
    try {
      conn = listener_.accept();
    } catch (const ProtocolError&) {
      return;
    }
    std::lock_guard lock(connections_mutex_);
    if (stopping_.load()) return;
    net::Socket& owned = connections_.emplace_back(std::move(conn));
    workers_.emplace_back([this, &owned] { serve_connection(owned); });
  }
}

void ModelServer::serve_connection(net::Socket& conn) {
  constexpr std::size_t kMaxPayloadValues = std::size_t{1} << 26;
  try {
    const std::string hello = conn.read_line();
    if (hello != wire::hello_line().substr(0, wire::hello_line().size() - 1)) {
      conn.write_all(wire::error_line(0, "unsupported handshake"));
      return;
    }
    conn.write_all(wire::model_line(dimension_, class_count_));
    while (!stopping_.load()) {
      const std::string header = conn.read_line();
      std::istringstream words(header);
      std::string verb;
      std::uint64_t id = 0;
      std::size_t n = 0;
      if (!(words >> verb >> id >> n) || verb != "QUERY") {
        conn.write_all(wire::error_line(id, "malformed frame"));
        return;
      }
      if (n > kMaxPayloadValues) return;  // oversized: drop the connection
      const std::vector<double> image = wire::decode_pixels(conn.read_exact(4 * n));
      if (n != dimension_) {
        conn.write_all(wire::error_line(id, "expected " + std::to_string(dimension_) + " values"));
        continue;
      }
      bool in_range = true;
      for (double v : image) in_range = in_range && v >= 0.0 && v <= 1.0;
      if (!in_range) {
        conn.write_all(wire::error_line(id, "pixel outside [0, 1]"));
        continue;
      }
      std::uint32_t label = 0;
      try {
        label = classify_(image);
      } catch (const std::exception& e) {
        conn.write_all(wire::error_line(id, e.what()));
        continue;
      }
      ++served_;
      conn.write_all(wire::label_line(id, label));
    }
  } catch (const ProtocolError&) {
    // Peer went away or the server is stopping.
  }
}

}  // namespace adba
