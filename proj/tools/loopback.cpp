#include "loopback.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "gridsec/errors.hpp"

namespace gridsec::tools {

namespace {

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

sockaddr_in loopback(std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

[[noreturn]] void sys_fail(const char* what) { throw Error(std::string(what) + ": " + std::strerror(errno)); }

}  // namespace

Bytes receive_once(std::uint16_t port) {
  Fd server(::socket(AF_INET, SOCK_STREAM, 0));
  if (server.get() < 0) sys_fail("socket");
  int yes = 1;
  ::setsockopt(server.get(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  auto addr = loopback(port);
  if (::bind(server.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) sys_fail("bind");
  if (::listen(server.get(), 1) < 0) sys_fail("listen");
  Fd conn(::accept(server.get(), nullptr, nullptr));
  if (conn.get() < 0) sys_fail("accept");

  Bytes out;
  std::uint8_t buf[65536];
  while (true) {
    const ssize_t n = ::read(conn.get(), buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("read");
    }
    if (n == 0) break;
    out.insert(out.end(), buf, buf + n);
  }
  return out;
}

void send_once(std::uint16_t port, ByteView data, int wait_ms) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(wait_ms);
  while (true) {
    Fd conn(::socket(AF_INET, SOCK_STREAM, 0));
    if (conn.get() < 0) sys_fail("socket");
    auto addr = loopback(port);
    if (::connect(conn.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) {
      std::size_t off = 0;
      while (off < data.size()) {
        const ssize_t n = ::write(conn.get(), data.data() + off, data.size() - off);
        if (n < 0) {
          if (errno == EINTR) continue;
          sys_fail("write");
        }
        off += static_cast<std::size_t>(n);
      }
      return;
    }
    if (std::chrono::steady_clock::now() >= deadline) sys_fail("connect");
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace gridsec::tools
