#include "segtrack/core/geometry.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

// Snaps values within this distance of an integer before taking ceil, so a
// box translated by an integer offset keeps the same pixel span.
constexpr double kSnap = 1e-9;

struct AxisPlacement {
  int origin;
  int pad_lo;
  int pad_hi;
};

AxisPlacement place_axis(const PixelSpan& span, int extent) {
  const int pad_lo = std::clamp(-span.start, 0, span.count);
  const int end = span.start + span.count;
  const int pad_hi = std::clamp(end - extent, 0, span.count - pad_lo);
  return {span.start + pad_lo, pad_lo, pad_hi};
}

}  // namespace

BoundingBox::BoundingBox(double cx, double cy, double w, double h)
    : cx_(cx), cy_(cy), w_(w), h_(h) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw GeometryError("BoundingBox: non-finite coordinates");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw GeometryError("BoundingBox: degenerate box (w=" + std::to_string(w) +
                        ", h=" + std::to_string(h) + ")");
  }
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
  return os << "(cx=" << b.cx() << ", cy=" << b.cy() << ", w=" << b.w()
            << ", h=" << b.h() << ")";
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

PixelSpan pixel_span(double center, double length) {
  const int count = std::max(0, round_half_up(length));
  const int start =
      static_cast<int>(std::ceil(center - count / 2.0 - kSnap));
  return {start, count};
}

Placement place_crop(const BoundingBox& bbox, double k, int width, int height) {
  if (!(k >= 1.0) || !std::isfinite(k)) {
    throw ParameterError("searching-area factor k must be >= 1, got " +
                         std::to_string(k));
  }
  const PixelSpan sx = pixel_span(bbox.cx(), k * bbox.w());
  const PixelSpan sy = pixel_span(bbox.cy(), k * bbox.h());
  if (sx.count == 0 || sy.count == 0) {
    throw GeometryError("searching area rounds to zero area");
  }
  const AxisPlacement ax = place_axis(sx, width);
  const AxisPlacement ay = place_axis(sy, height);
  return Placement{ax.origin,  ay.origin, sx.count,  sy.count,
                   ax.pad_lo,  ay.pad_lo, ax.pad_hi, ay.pad_hi};
}

Rgb mean_color(const Frame& frame) {
  std::array<std::uint64_t, 3> sum{0, 0, 0};
  const auto px = frame.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    sum[0] += px[i];
    sum[1] += px[i + 1];
    sum[2] += px[i + 2];
  }
  const std::uint64_t n = px.size() / 3;
  Rgb out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<std::uint8_t>((2 * sum[c] + n) / (2 * n));
  }
  return out;
}

SearchingArea crop_searching_area(const Frame& frame, const BoundingBox& bbox,
                                  double k) {
  const Placement pl = place_crop(bbox, k, frame.width(), frame.height());
  Frame patch(pl.crop_w, pl.crop_h, mean_color(frame));
  for (int y = 0; y < pl.inner_h(); ++y) {
    for (int x = 0; x < pl.inner_w(); ++x) {
      patch.set(pl.pad_left + x, pl.pad_top + y,
                frame.at(pl.origin_x + x, pl.origin_y + y));
    }
  }
  return SearchingArea{std::move(patch), pl, bbox, k};
}

BinaryMask crop_mask(const BinaryMask& mask, const Placement& pl) {
  BinaryMask out(pl.crop_w, pl.crop_h);
  for (int y = 0; y < pl.inner_h(); ++y) {
    for (int x = 0; x < pl.inner_w(); ++x) {
      out.set(pl.pad_left + x, pl.pad_top + y,
              mask.at(pl.origin_x + x, pl.origin_y + y) != 0);
    }
  }
  return out;
}

ProbMap paste_map(const ProbMap& map, const Placement& pl, int width,
                  int height) {
  if (map.width() != pl.crop_w || map.height() != pl.crop_h) {
    throw ContractError("paste_map: map is " + std::to_string(map.width()) +
                        "x" + std::to_string(map.height()) +
                        " but the crop is " + std::to_string(pl.crop_w) + "x" +
                        std::to_string(pl.crop_h));
  }
  ProbMap out(width, height);
  for (int y = 0; y < pl.inner_h(); ++y) {
    for (int x = 0; x < pl.inner_w(); ++x) {
      out.set(pl.origin_x + x, pl.origin_y + y,
              map.at(pl.pad_left + x, pl.pad_top + y));
    }
  }
  return out;
}

BoundingBox enclosing_bbox(const BinaryMask& mask) {
  int min_x = mask.width(), max_x = -1, min_y = mask.height(), max_y = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) == 0) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) throw EmptyTargetError("enclosing_bbox: mask is empty");
  return BoundingBox((min_x + max_x) / 2.0, (min_y + max_y) / 2.0,
                     max_x - min_x + 1, max_y - min_y + 1);
}

BinaryMask rect_to_mask(const BoundingBox& bbox, int width, int height) {
  BinaryMask out(width, height);
  const PixelSpan sx = pixel_span(bbox.cx(), bbox.w());
  const PixelSpan sy = pixel_span(bbox.cy(), bbox.h());
  const int x0 = std::max(sx.start, 0);
  const int x1 = std::min(sx.start + sx.count, width);
  const int y0 = std::max(sy.start, 0);
  const int y1 = std::min(sy.start + sy.count, height);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) out.set(x, y, true);
  }
  return out;
}

BinaryMask binarize(const ProbMap& map, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ParameterError("binarize: tau must lie in [0,1]");
  }
  std::vector<std::uint8_t> bits(map.values().size());
  std::transform(map.values().begin(), map.values().end(), bits.begin(),
                 [tau](float v) { return static_cast<double>(v) > tau ? 1 : 0; });
  return BinaryMask(map.width(), map.height(), std::move(bits));
}

}  // namespace segtrack
