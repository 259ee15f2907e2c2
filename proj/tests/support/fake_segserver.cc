// Minimal wire-protocol peer for client tests. Reads frames on stdin and
// answers on stdout.
//
//   fake_segserver [mode]
//     echo-box  RESULT = 1 inside the SEGMENT bbox, 0 elsewhere (default)
//     half      RESULT = 0.5 everywhere
//     error     answer every SEGMENT with ERROR "backend exploded"
//     crash     exit without answering the first SEGMENT
//     badsize   RESULT one column too narrow
//     garbage   reply with bytes that are not a frame
//     log=PATH  (any mode) append one line per received message to PATH

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "segtrack/core/geometry.h"
#include "segtrack/segmenters/wire_protocol.h"

namespace {

using namespace segtrack;

bool read_exact(std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    const ssize_t r = ::read(STDIN_FILENO, p, n);
    if (r <= 0) return false;
    p += r;
    n -= static_cast<std::size_t>(r);
  }
  return true;
}

void write_all(const std::vector<std::uint8_t>& b) {
  std::size_t done = 0;
  while (done < b.size()) {
    const ssize_t r = ::write(STDOUT_FILENO, b.data() + done, b.size() - done);
    if (r <= 0) std::exit(1);
    done += static_cast<std::size_t>(r);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string mode = "echo-box";
  std::string log_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("log=", 0) == 0) {
      log_path = a.substr(4);
    } else {
      mode = a;
    }
  }
  std::ofstream log;
  if (!log_path.empty()) log.open(log_path, std::ios::app);
  bool initialized = false;
  for (;;) {
    std::array<std::uint8_t, wire::kHeaderSize> header{};
    if (!read_exact(header.data(), header.size())) return 0;
    wire::Header h{};
    try {
      h = wire::decode_header(header);
    } catch (const std::exception& e) {
      write_all(wire::encode(wire::make_error(e.what())));
      return 1;
    }
    std::vector<std::uint8_t> payload(h.payload_len);
    if (!read_exact(payload.data(), payload.size())) return 1;
    if (log.is_open()) {
      log << static_cast<int>(h.type) << " " << h.payload_len << std::endl;
    }
    switch (h.type) {
      case wire::MessageType::Shutdown:
        return 0;
      case wire::MessageType::Init:
        wire::decode_init(payload);
        initialized = true;
        break;
      case wire::MessageType::Segment: {
        if (!initialized) {
          write_all(wire::encode(wire::make_error("not initialized")));
          break;
        }
        if (mode == "crash") return 3;
        if (mode == "error") {
          write_all(wire::encode(wire::make_error("backend exploded")));
          break;
        }
        if (mode == "garbage") {
          write_all({'n', 'o', 'p', 'e', 0, 0, 0, 0, 0});
          break;
        }
        const wire::SegmentRequest req = wire::decode_segment(payload);
        wire::ResultReply reply;
        reply.width = req.width - (mode == "badsize" ? 1 : 0);
        reply.height = req.height;
        reply.probabilities.assign(static_cast<std::size_t>(reply.width) * reply.height,
                                   mode == "half" ? 0.5F : 0.0F);
        if (mode == "echo-box") {
          const BoundingBox b(req.bbox[0], req.bbox[1], req.bbox[2], req.bbox[3]);
          const BinaryMask m = rect_to_mask(b, static_cast<int>(req.width),
                                            static_cast<int>(req.height));
          for (std::size_t i = 0; i < reply.probabilities.size(); ++i) {
            reply.probabilities[i] = m.bits()[i] ? 1.0F : 0.0F;
          }
        }
        write_all(wire::encode(wire::make_result(reply)));
        break;
      }
      default:
        write_all(wire::encode(wire::make_error("unexpected message")));
        break;
    }
  }
}
