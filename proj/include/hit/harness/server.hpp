#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <functional>
#include <list>
#include <mutex>
#include <string>
#include <thread>

#include "hit/harness/protocol.hpp"
#include "hit/harness/session.hpp"

namespace hit::harness {

struct ServerOptions {
  int port = 0;                   ///< 0 picks a free port
  int stale_ms = 1000;            ///< client silence that pauses the session
  bool loopback_only = true;
  std::function<void(const std::string&)> log;  ///< optional diagnostics
};

/// Threaded TCP server; every connection owns an independent Session.
class Server {
 public:
  Server(ScenarioConfig cfg, ServerOptions opt) : cfg_(std::move(cfg)), opt_(std::move(opt)) { validate(cfg_); }
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  /// Binds and starts accepting; returns the bound port.
  int start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw protocol::ProtocolError(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(opt_.loopback_only ? INADDR_LOOPBACK : INADDR_ANY);
    addr.sin_port = htons(static_cast<std::uint16_t>(opt_.port));
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
      const std::string why = std::strerror(errno);
      ::close(listen_fd_);
      listen_fd_ = -1;
      throw protocol::ProtocolError("cannot listen on port " + std::to_string(opt_.port) + ": " + why);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    running_ = true;
    acceptor_ = std::thread([this] { accept_loop(); });
    return port_;
  }

  /// Stops accepting, disconnects every client and joins all threads.
  void stop() {
    if (!running_.exchange(false)) return;
    if (acceptor_.joinable()) acceptor_.join();
    ::close(listen_fd_);
    listen_fd_ = -1;
    std::list<Conn> conns;
    {
      std::lock_guard lk(mu_);
      for (auto& c : conns_) ::shutdown(c.fd, SHUT_RDWR);
      conns.splice(conns.end(), conns_);
    }
    for (auto& c : conns) {
      if (c.thread.joinable()) c.thread.join();
      ::close(c.fd);
    }
  }

  int port() const { return port_; }
  std::size_t sessions_served() const { return served_; }

 private:
  struct Conn {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void say(const std::string& s) const {
    if (opt_.log) opt_.log(s);
  }

  void accept_loop() {
    while (running_) {
      pollfd pfd{listen_fd_, POLLIN, 0};
      const int r = ::poll(&pfd, 1, 50);
      reap();
      if (r <= 0) continue;
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) continue;
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      std::lock_guard lk(mu_);
      auto& c = conns_.emplace_back();
      c.fd = fd;
      c.thread = std::thread([this, &c] {
        serve_client(c.fd);
        c.done = true;
      });
    }
  }

  // Joins finished connection threads.
  void reap() {
    std::lock_guard lk(mu_);
    for (auto it = conns_.begin(); it != conns_.end();) {
      if (it->done) {
        it->thread.join();
        ::close(it->fd);
        it = conns_.erase(it);
      } else {
        ++it;
      }
    }
  }

  // The fd is closed by whoever joins this thread.
  void serve_client(int fd) {
    ++served_;
    try {
      Session session(cfg_);
      protocol::SocketReader reader(fd);
      std::string payload;
      while (running_) {
        const auto st = reader.read(payload, opt_.stale_ms);
        if (st == protocol::SocketReader::Status::Closed) break;
        std::vector<json> out;
        if (st == protocol::SocketReader::Status::Timeout) {
          out = session.on_silence();
        } else {
          try {
            out = session.handle_payload(payload);
          } catch (const std::exception& e) {
            say(std::string("session error: ") + e.what());
            protocol::send_message(fd, protocol::error_message(e.what()));
            break;
          }
        }
        std::string bytes;
        for (const auto& m : out) bytes += protocol::encode(m);
        if (!bytes.empty()) protocol::send_all(fd, bytes);
      }
    } catch (const std::exception& e) {
      say(std::string("connection dropped: ") + e.what());
    }
    ::shutdown(fd, SHUT_RDWR);
  }

  ScenarioConfig cfg_;
  ServerOptions opt_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> served_{0};
  std::thread acceptor_;
  std::mutex mu_;
  std::list<Conn> conns_;
};

}  // namespace hit::harness
