#include "segtrack/bench/rle.h"

#include <charconv>
#include <cstdint>
#include <vector>

#include "segtrack/error.h"

namespace segtrack {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

// Parses a non-negative decimal that must span all of `s`.
std::uint64_t parse_count(std::string_view s, std::string_view line) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw RleError("rle: bad number '" + std::string(s) + "' in '" + std::string(line) + "'");
  }
  return v;
}

}  // namespace

std::string rle_encode(const BinaryMask& mask) {
  int x0 = mask.width();
  int y0 = mask.height();
  int x1 = -1;
  int y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return "m0,0,0,0,";
  const int w = x1 - x0 + 1;
  const int h = y1 - y0 + 1;
  std::string out = "m" + std::to_string(x0) + "," + std::to_string(y0) + "," +
                    std::to_string(w) + "," + std::to_string(h) + ",";
  std::uint8_t current = 0;
  std::uint64_t run = 0;
  bool first = true;
  auto flush = [&] {
    if (!first) out += ' ';
    out += std::to_string(run);
    first = false;
  };
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const std::uint8_t v = mask.at(x, y);
      if (v != current) {
        flush();
        current = v;
        run = 0;
      }
      ++run;
    }
  }
  if (current == 1) flush();
  return out;
}

BinaryMask rle_decode(std::string_view line, int width, int height) {
  if (width < 1 || height < 1) throw ContractError("rle_decode: mask size must be positive");
  const std::string_view text = trim(line);
  if (text.empty() || text.front() != 'm') {
    throw RleError("rle: line must start with 'm': '" + std::string(text) + "'");
  }
  std::string_view rest = text.substr(1);
  std::uint64_t box[4];
  for (std::uint64_t& v : box) {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      throw RleError("rle: expected 4 comma-separated box values in '" + std::string(text) + "'");
    }
    v = parse_count(rest.substr(0, comma), text);
    rest.remove_prefix(comma + 1);
  }
  const auto [x0, y0, w, h] = box;
  BinaryMask mask(width, height);
  if (w == 0 || h == 0) {
    if (w != 0 || h != 0 || !trim(rest).empty()) {
      throw RleError("rle: empty region with runs or half-empty size in '" +
                     std::string(text) + "'");
    }
    return mask;
  }
  const auto uw = static_cast<std::uint64_t>(width);
  const auto uh = static_cast<std::uint64_t>(height);
  if (x0 >= uw || w > uw - x0 || y0 >= uh || h > uh - y0) {
    throw RleError("rle: region exceeds the " + std::to_string(width) + "x" +
                   std::to_string(height) + " mask in '" + std::string(text) + "'");
  }
  const std::uint64_t area = w * h;
  std::uint64_t pos = 0;
  bool ones = false;
  while (!rest.empty()) {
    const auto space = rest.find(' ');
    const std::string_view tok = rest.substr(0, space);
    rest.remove_prefix(space == std::string_view::npos ? rest.size() : space + 1);
    const std::uint64_t run = parse_count(tok, text);
    if (run > area - pos) {
      throw RleError("rle: runs exceed the region area in '" + std::string(text) + "'");
    }
    if (ones) {
      for (std::uint64_t i = pos; i < pos + run; ++i) {
        mask.set(static_cast<int>(x0 + i % w), static_cast<int>(y0 + i / w), true);
      }
    }
    pos += run;
    ones = !ones;
  }
  return mask;
}

}  // namespace segtrack
