#pragma once

// Live session wire format.
//
// Every message is one frame: a 4-byte unsigned big-endian payload length N
// (1 <= N <= kMaxFrame) followed by N bytes of UTF-8 JSON, one object per
// frame, with a string "type" member. See docs/protocol.md.

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hit/core/error.hpp"

namespace hit::harness::protocol {

using json = nlohmann::json;

inline constexpr std::uint32_t kMaxFrame = 1u << 20;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Length prefix plus payload.
inline std::string encode_frame(const std::string& payload) {
  if (payload.empty() || payload.size() > kMaxFrame) throw ProtocolError("frame payload size out of range");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out(4, '\0');
  out[0] = static_cast<char>((n >> 24) & 0xff);
  out[1] = static_cast<char>((n >> 16) & 0xff);
  out[2] = static_cast<char>((n >> 8) & 0xff);
  out[3] = static_cast<char>(n & 0xff);
  return out + payload;
}

inline std::string encode(const json& msg) { return encode_frame(msg.dump()); }

inline std::uint32_t decode_length(const unsigned char* b) {
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

/// Incremental decoder for a byte stream.
class FrameDecoder {
 public:
  void feed(const char* data, std::size_t n) { buf_.append(data, n); }

  /// Next complete payload, or nullopt if more bytes are needed.
  std::optional<std::string> next() {
    if (buf_.size() < 4) return std::nullopt;
    const auto n = decode_length(reinterpret_cast<const unsigned char*>(buf_.data()));
    if (n == 0 || n > kMaxFrame) throw ProtocolError("bad frame length " + std::to_string(n));
    if (buf_.size() < 4 + std::size_t{n}) return std::nullopt;
    std::string payload = buf_.substr(4, n);
    buf_.erase(0, 4 + std::size_t{n});
    return payload;
  }

 private:
  std::string buf_;
};

/// Parses a payload into a JSON object with a string "type".
inline json parse_message(const std::string& payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ProtocolError("message must be an object with a string 'type'");
  return j;
}

inline json error_message(const std::string& what) { return {{"type", "error"}, {"message", what}}; }

// Blocking socket helpers (POSIX).

inline void send_all(int fd, const std::string& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("send failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

inline void send_message(int fd, const json& msg) { send_all(fd, encode(msg)); }

/// Frame reader over a socket with a per-call timeout.
class SocketReader {
 public:
  explicit SocketReader(int fd) : fd_(fd) {}

  enum class Status { Message, Timeout, Closed };

  /// Waits up to `timeout_ms` (negative: forever) for the next full frame.
  Status read(std::string& payload, int timeout_ms) {
    for (;;) {
      if (auto p = dec_.next()) {
        payload = std::move(*p);
        return Status::Message;
      }
      pollfd pfd{fd_, POLLIN, 0};
      const int r = ::poll(&pfd, 1, timeout_ms);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (r == 0) return Status::Timeout;
      char buf[4096];
      const auto n = ::recv(fd_, buf, sizeof buf, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        return Status::Closed;
      }
      if (n == 0) return Status::Closed;
      dec_.feed(buf, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  FrameDecoder dec_;
};

/// Connects to host:port; returns the socket.
inline int connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
    throw ProtocolError("cannot resolve " + host);
  int fd = -1;
  for (auto* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw ProtocolError("cannot connect to " + host + ":" + std::to_string(port));
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

}  // namespace hit::harness::protocol
