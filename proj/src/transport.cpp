#include "gubqc/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <deque>

#include "gubqc/errors.hpp"
#include "gubqc/wire.hpp"

namespace gubqc {
namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw ProtocolError(what + ": " + std::strerror(errno));
}

struct LocalChannel {
  std::deque<std::vector<uint8_t>> a_to_b;
  std::deque<std::vector<uint8_t>> b_to_a;
};

class LocalEnd : public Transport {
 public:
  LocalEnd(std::shared_ptr<LocalChannel> chan, bool is_a)
      : chan_(std::move(chan)), is_a_(is_a) {}

  void send_frame(const std::vector<uint8_t>& frame) override {
    (is_a_ ? chan_->a_to_b : chan_->b_to_a).push_back(frame);
  }

  std::optional<std::vector<uint8_t>> recv_frame() override {
    auto& queue = is_a_ ? chan_->b_to_a : chan_->a_to_b;
    if (queue.empty()) return std::nullopt;
    std::vector<uint8_t> frame = std::move(queue.front());
    queue.pop_front();
    return frame;
  }

 private:
  std::shared_ptr<LocalChannel> chan_;
  bool is_a_;
};

void write_all(int fd, const uint8_t* data, size_t len) {
  while (len > 0) {
    const ssize_t sent = ::send(fd, data, len, MSG_NOSIGNAL);
    if (sent < 0) {
      if (errno == EINTR) continue;
      throw_errno("send failed");
    }
    data += sent;
    len -= static_cast<size_t>(sent);
  }
}

}  // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
make_local_pair() {
  auto chan = std::make_shared<LocalChannel>();
  return {std::make_unique<LocalEnd>(chan, true),
          std::make_unique<LocalEnd>(chan, false)};
}

TcpTransport::TcpTransport(int fd) : fd_(fd) {
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::send_frame(const std::vector<uint8_t>& frame) {
  write_all(fd_, frame.data(), frame.size());
}

std::optional<std::vector<uint8_t>> TcpTransport::recv_frame() {
  wire::FrameReader reader;
  reader.feed(buffer_.data(), buffer_.size());
  buffer_.clear();
  for (;;) {
    if (auto frame = reader.next_frame()) {
      // Anything ahead of the next frame boundary stays buffered.
      buffer_ = reader.pending();
      return frame;
    }
    uint8_t chunk[4096];
    const ssize_t got = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw_errno("recv failed");
    }
    if (got == 0) {
      if (reader.pending_bytes() > 0) {
        throw WireError("connection closed mid-frame",
                        reader.pending_bytes());
      }
      return std::nullopt;
    }
    reader.feed(chunk, static_cast<size_t>(got));
  }
}

std::unique_ptr<TcpTransport> TcpTransport::connect_to(
    const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc =
      ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0) {
    throw ProtocolError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw ProtocolError("cannot connect to " + host + ":" +
                        std::to_string(port));
  }
  return std::make_unique<TcpTransport>(fd);
}

TcpListener::TcpListener(const std::string& host, uint16_t port) : fd_(-1) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const int rc =
      ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0) {
    throw ProtocolError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd_ < 0) continue;
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 &&
        ::listen(fd_, 8) == 0) {
      break;
    }
    ::close(fd_);
    fd_ = -1;
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    throw_errno("cannot listen on " + host + ":" + std::to_string(port));
  }
  sockaddr_storage addr{};
  socklen_t alen = sizeof(addr);
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &alen) != 0) {
    throw_errno("getsockname failed");
  }
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpTransport> TcpListener::accept_one() {
  for (;;) {
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client >= 0) return std::make_unique<TcpTransport>(client);
    if (errno == EINTR) continue;
    throw_errno("accept failed");
  }
}

}  // namespace gubqc
