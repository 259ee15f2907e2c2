#include "segtrack/segmenters/transport.h"

#include <netdb.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include "segtrack/error.h"

extern char** environ;

namespace segtrack {
namespace {

// A peer that dies while we write would otherwise kill this process with
// SIGPIPE; the failed write surfaces as EPIPE instead.
void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

void Transport::send(const wire::Message& msg) { write_all(wire::encode(msg)); }

std::optional<wire::Message> Transport::receive() {
  std::array<std::uint8_t, wire::kHeaderSize> header{};
  if (!read_exact(header)) return std::nullopt;
  const wire::Header h = wire::decode_header(header);
  wire::Message msg{h.type, std::vector<std::uint8_t>(h.payload_len)};
  if (h.payload_len > 0 && !read_exact(msg.payload)) {
    throw TransportError("peer closed the stream mid-message");
  }
  return msg;
}

FdTransport::FdTransport(int read_fd, int write_fd)
    : read_fd_(read_fd), write_fd_(write_fd) {
  ignore_sigpipe();
}

FdTransport::~FdTransport() { close_fds(); }

void FdTransport::close_fds() {
  if (write_fd_ >= 0) ::close(write_fd_);
  if (read_fd_ >= 0 && read_fd_ != write_fd_) ::close(read_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdTransport::write_all(std::span<const std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(write_fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("write to segmenter peer failed: " + errno_text());
    }
    done += static_cast<std::size_t>(n);
  }
}

bool FdTransport::read_exact(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t n = ::read(read_fd_, out.data() + done, out.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("read from segmenter peer failed: " + errno_text());
    }
    if (n == 0) {
      if (done == 0) return false;
      throw TransportError("segmenter peer closed the stream mid-message");
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

ChildProcessTransport::ChildProcessTransport(int read_fd, int write_fd, pid_t pid)
    : FdTransport(read_fd, write_fd), pid_(pid) {}

ChildProcessTransport::~ChildProcessTransport() {
  close_fds();
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
}

std::unique_ptr<ChildProcessTransport> ChildProcessTransport::spawn(
    const std::string& command) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw TransportError("pipe failed: " + errno_text());
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError("pipe failed: " + errno_text());
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, to_child[1]);
  posix_spawn_file_actions_addclose(&actions, from_child[0]);
  posix_spawn_file_actions_addclose(&actions, to_child[0]);
  posix_spawn_file_actions_addclose(&actions, from_child[1]);
  std::string sh = "/bin/sh";
  std::string flag = "-c";
  std::string cmd = command;
  char* argv[] = {sh.data(), flag.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(to_child[0]);
  ::close(from_child[1]);
  if (rc != 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    throw TransportError("cannot start segmenter process: " +
                         std::string(std::strerror(rc)));
  }
  return std::unique_ptr<ChildProcessTransport>(
      new ChildProcessTransport(from_child[0], to_child[1], pid));
}

namespace {

class SocketTransport final : public FdTransport {
 public:
  explicit SocketTransport(int fd) : FdTransport(fd, fd) {}
};

}  // namespace

std::unique_ptr<Transport> connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + gai_strerror(rc));
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
    throw TransportError("cannot connect to " + host + ":" + service);
  }
  return std::make_unique<SocketTransport>(fd);
}

std::unique_ptr<Transport> open_endpoint(const std::string& endpoint) {
  constexpr std::string_view kTcp = "tcp://";
  constexpr std::string_view kExec = "exec:";
  if (endpoint.rfind(kTcp, 0) == 0) {
    const std::string rest = endpoint.substr(kTcp.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw ConfigError("segmenter endpoint '" + endpoint + "' lacks host:port");
    }
    int port = 0;
    try {
      std::size_t used = 0;
      port = std::stoi(rest.substr(colon + 1), &used);
      if (used != rest.size() - colon - 1) throw std::invalid_argument("port");
    } catch (const std::exception&) {
      throw ConfigError("segmenter endpoint '" + endpoint + "' has a bad port");
    }
    if (port < 1 || port > 65535) {
      throw ConfigError("segmenter endpoint '" + endpoint + "' has a bad port");
    }
    return connect_tcp(rest.substr(0, colon), port);
  }
  if (endpoint.rfind(kExec, 0) == 0) {
    const std::string command = endpoint.substr(kExec.size());
    if (command.empty()) throw ConfigError("segmenter endpoint has an empty command");
    return ChildProcessTransport::spawn(command);
  }
  throw ConfigError("segmenter endpoint '" + endpoint +
                    "' must start with tcp:// or exec:");
}

}  // namespace segtrack
