#pragma once

#include <sys/types.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segtrack/segmenters/wire_protocol.h"

namespace segtrack {

// Blocking byte stream to an external segmenter.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws TransportError if the stream is closed or broken.
  virtual void write_all(std::span<const std::uint8_t> bytes) = 0;
  // Fills `out` completely. Returns false if the stream was closed cleanly
  // before the first byte; throws TransportError on a close mid-read.
  virtual bool read_exact(std::span<std::uint8_t> out) = 0;

  void send(const wire::Message& msg);
  // nullopt on a clean end of stream between messages.
  std::optional<wire::Message> receive();
};

// Reads from one descriptor, writes to another. Owns both.
class FdTransport : public Transport {
 public:
  FdTransport(int read_fd, int write_fd);
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void write_all(std::span<const std::uint8_t> bytes) override;
  bool read_exact(std::span<std::uint8_t> out) override;

 protected:
  void close_fds();

 private:
  int read_fd_;
  int write_fd_;
};

// Talks to a child process over its stdin/stdout. The child is started with
// `/bin/sh -c command`; the destructor closes the pipes and reaps it.
class ChildProcessTransport final : public FdTransport {
 public:
  static std::unique_ptr<ChildProcessTransport> spawn(const std::string& command);
  ~ChildProcessTransport() override;

  pid_t pid() const { return pid_; }

 private:
  ChildProcessTransport(int read_fd, int write_fd, pid_t pid);
  pid_t pid_;
};

// TCP client connection.
std::unique_ptr<Transport> connect_tcp(const std::string& host, int port);

// Endpoint syntax: "tcp://host:port" or "exec:<shell command>".
// Throws ConfigError on anything else, TransportError if connecting fails.
std::unique_ptr<Transport> open_endpoint(const std::string& endpoint);

}  // namespace segtrack
