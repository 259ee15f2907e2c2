#include "segtrack/segmenters/wire_protocol.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "segtrack/error.h"

namespace segtrack::wire {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void box(const Box4& b) {
    for (float v : b) f32(v);
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, const char* what)
      : data_(data), what_(what) {}

  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32() {
    auto b = need(4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  Box4 box() { return {f32(), f32(), f32(), f32()}; }
  std::vector<std::uint8_t> bytes(std::uint64_t n) {
    if (n > remaining()) fail("truncated payload");
    auto b = need(static_cast<std::size_t>(n));
    return {b.begin(), b.end()};
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  void finish() const {
    if (pos_ != data_.size()) fail("trailing bytes in payload");
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw TransportError(std::string("protocol: ") + what_ + ": " + why);
  }

 private:
  std::span<const std::uint8_t> need(std::size_t n) {
    if (n > remaining()) fail("truncated payload");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const std::uint8_t> data_;
  const char* what_;
  std::size_t pos_ = 0;
};

Box4 to_box4(const BoundingBox& b) {
  return {static_cast<float>(b.cx()), static_cast<float>(b.cy()),
          static_cast<float>(b.w()), static_cast<float>(b.h())};
}

std::uint64_t pixels(std::uint32_t w, std::uint32_t h) {
  return static_cast<std::uint64_t>(w) * h;
}

}  // namespace

std::vector<std::uint8_t> encode(const Message& msg) {
  if (msg.payload.size() > kMaxPayload) {
    throw TransportError("protocol: payload too large");
  }
  Writer w;
  w.bytes(kMagic);
  w.u8(static_cast<std::uint8_t>(msg.type));
  w.u32(static_cast<std::uint32_t>(msg.payload.size()));
  w.bytes(msg.payload);
  return w.take();
}

Message make_init(const InitRequest& req) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(req.mode));
  w.box(req.bbox);
  w.u32(req.width);
  w.u32(req.height);
  if (req.mode != TemplateMode::BboxChannel) w.bytes(req.crop);
  if (req.mode == TemplateMode::CropWithMask) w.bytes(req.mask);
  return {MessageType::Init, w.take()};
}

Message make_init(const Template& tmpl) {
  InitRequest req;
  req.mode = tmpl.mode();
  req.bbox = to_box4(tmpl.bbox());
  req.width = static_cast<std::uint32_t>(tmpl.width());
  req.height = static_cast<std::uint32_t>(tmpl.height());
  if (tmpl.crop()) {
    req.crop.assign(tmpl.crop()->pixels().begin(), tmpl.crop()->pixels().end());
  }
  if (tmpl.mask()) {
    req.mask.assign(tmpl.mask()->bits().begin(), tmpl.mask()->bits().end());
  }
  return make_init(req);
}

Message make_segment(const SegmentRequest& req) {
  Writer w;
  w.u32(req.width);
  w.u32(req.height);
  w.bytes(req.patch);
  w.box(req.bbox);
  return {MessageType::Segment, w.take()};
}

Message make_segment(const Frame& patch, const BoundingBox& local_bbox) {
  SegmentRequest req;
  req.width = static_cast<std::uint32_t>(patch.width());
  req.height = static_cast<std::uint32_t>(patch.height());
  req.patch.assign(patch.pixels().begin(), patch.pixels().end());
  req.bbox = to_box4(local_bbox);
  return make_segment(req);
}

Message make_result(const ResultReply& reply) {
  Writer w;
  w.u32(reply.width);
  w.u32(reply.height);
  for (float v : reply.probabilities) w.f32(v);
  return {MessageType::Result, w.take()};
}

Message make_shutdown() { return {MessageType::Shutdown, {}}; }

Message make_error(std::string_view text) {
  return {MessageType::Error, std::vector<std::uint8_t>(text.begin(), text.end())};
}

InitRequest decode_init(std::span<const std::uint8_t> payload) {
  Reader r(payload, "INIT");
  InitRequest req;
  const std::uint8_t mode = r.u8();
  if (mode < 1 || mode > 3) r.fail("unknown template mode " + std::to_string(mode));
  req.mode = static_cast<TemplateMode>(mode);
  req.bbox = r.box();
  req.width = r.u32();
  req.height = r.u32();
  if (req.mode != TemplateMode::BboxChannel) {
    req.crop = r.bytes(pixels(req.width, req.height) * 3);
  }
  if (req.mode == TemplateMode::CropWithMask) {
    req.mask = r.bytes(pixels(req.width, req.height));
  }
  r.finish();
  return req;
}

SegmentRequest decode_segment(std::span<const std::uint8_t> payload) {
  Reader r(payload, "SEGMENT");
  SegmentRequest req;
  req.width = r.u32();
  req.height = r.u32();
  req.patch = r.bytes(pixels(req.width, req.height) * 3);
  req.bbox = r.box();
  r.finish();
  return req;
}

ResultReply decode_result(std::span<const std::uint8_t> payload) {
  Reader r(payload, "RESULT");
  ResultReply reply;
  reply.width = r.u32();
  reply.height = r.u32();
  const std::uint64_t n = pixels(reply.width, reply.height);
  if (n * 4 != r.remaining()) r.fail("probability count does not match W*H");
  reply.probabilities.resize(static_cast<std::size_t>(n));
  for (float& v : reply.probabilities) v = r.f32();
  r.finish();
  return reply;
}

std::string decode_error(std::span<const std::uint8_t> payload) {
  return std::string(payload.begin(), payload.end());
}

Header decode_header(std::span<const std::uint8_t, kHeaderSize> bytes) {
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw TransportError("protocol: bad frame magic");
  }
  const std::uint8_t type = bytes[4];
  switch (static_cast<MessageType>(type)) {
    case MessageType::Init:
    case MessageType::Segment:
    case MessageType::Result:
    case MessageType::Shutdown:
    case MessageType::Error:
      break;
    default:
      throw TransportError("protocol: unknown message type " + std::to_string(type));
  }
  const std::uint32_t len = static_cast<std::uint32_t>(bytes[5]) |
                            (static_cast<std::uint32_t>(bytes[6]) << 8) |
                            (static_cast<std::uint32_t>(bytes[7]) << 16) |
                            (static_cast<std::uint32_t>(bytes[8]) << 24);
  if (len > kMaxPayload) throw TransportError("protocol: payload length too large");
  return {static_cast<MessageType>(type), len};
}

}  // namespace segtrack::wire
