#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gubqc {

// Bidirectional frame pipe. send_frame ships one already-encoded frame;
// recv_frame blocks until a whole frame (or end of stream) arrives.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send_frame(const std::vector<uint8_t>& frame) = 0;
  virtual std::optional<std::vector<uint8_t>> recv_frame() = 0;
};

// In-process duplex pair: frames sent on one end arrive on the other.
// Single-threaded use only (recv_frame returns nullopt when empty instead
// of blocking).
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
make_local_pair();

// Blocking TCP transport over the framed byte stream.
class TcpTransport : public Transport {
 public:
  explicit TcpTransport(int fd);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void send_frame(const std::vector<uint8_t>& frame) override;
  std::optional<std::vector<uint8_t>> recv_frame() override;

  static std::unique_ptr<TcpTransport> connect_to(const std::string& host,
                                                  uint16_t port);

 private:
  int fd_;
  std::vector<uint8_t> buffer_;
};

class TcpListener {
 public:
  // port 0 binds an ephemeral port; port() reports the bound one.
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  std::unique_ptr<TcpTransport> accept_one();

 private:
  int fd_;
  uint16_t port_;
};

}  // namespace gubqc
