#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segtrack/core/template.h"

namespace segtrack::wire {

// Framed, little-endian protocol spoken with external segmenters:
//
//   frame   = "STSG" | type u8 | payload_len u32 | payload
//   INIT    (0x01) mode u8 | bbox 4 x f32 | W u32 | H u32
//                  | RGB8 crop (mode >= 2) | mask u8 x W*H (mode == 3)
//   SEGMENT (0x02) W u32 | H u32 | RGB8 patch | bbox 4 x f32
//   RESULT  (0x82) W u32 | H u32 | f32 x W*H
//   SHUTDOWN(0x7F) empty
//   ERROR   (0xEE) UTF-8 message
//
// Boxes are (cx, cy, w, h) in the coordinates of the accompanying image.

inline constexpr std::array<std::uint8_t, 4> kMagic = {'S', 'T', 'S', 'G'};
inline constexpr std::size_t kHeaderSize = 9;
// Upper bound on accepted payloads; larger lengths are treated as corrupt.
inline constexpr std::uint32_t kMaxPayload = 256U * 1024U * 1024U;

enum class MessageType : std::uint8_t {
  Init = 0x01,
  Segment = 0x02,
  Result = 0x82,
  Shutdown = 0x7F,
  Error = 0xEE,
};

struct Message {
  MessageType type;
  std::vector<std::uint8_t> payload;
};

using Box4 = std::array<float, 4>;

struct InitRequest {
  TemplateMode mode = TemplateMode::BboxChannel;
  Box4 bbox{};
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> crop;  // W*H*3, empty for BboxChannel
  std::vector<std::uint8_t> mask;  // W*H, only for CropWithMask
};

struct SegmentRequest {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> patch;  // W*H*3
  Box4 bbox{};
};

struct ResultReply {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<float> probabilities;
};

// Header + payload.
std::vector<std::uint8_t> encode(const Message& msg);

Message make_init(const InitRequest& req);
Message make_init(const Template& tmpl);
Message make_segment(const SegmentRequest& req);
Message make_segment(const Frame& patch, const BoundingBox& local_bbox);
Message make_result(const ResultReply& reply);
Message make_shutdown();
Message make_error(std::string_view text);

// Payload decoders. Throw TransportError on any length or value mismatch.
InitRequest decode_init(std::span<const std::uint8_t> payload);
SegmentRequest decode_segment(std::span<const std::uint8_t> payload);
ResultReply decode_result(std::span<const std::uint8_t> payload);
std::string decode_error(std::span<const std::uint8_t> payload);

// Parses a 9-byte header; returns the type and payload length. Throws
// TransportError on a bad magic, unknown type or oversized payload.
struct Header {
  MessageType type;
  std::uint32_t payload_len;
};
Header decode_header(std::span<const std::uint8_t, kHeaderSize> bytes);

}  // namespace segtrack::wire
