#pragma once

#include <iosfwd>

#include "segtrack/core/raster.h"

namespace segtrack {

// Axis-aligned box in frame coordinates. (0,0) is the center of the top-left
// pixel; x is the column, y the row.
class BoundingBox {
 public:
  // Throws GeometryError unless w > 0 and h > 0 and all values are finite.
  BoundingBox(double cx, double cy, double w, double h);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double h() const { return h_; }

  BoundingBox translated(double dx, double dy) const {
    return {cx_ + dx, cy_ + dy, w_, h_};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& b);

// Round-half-up, the single rounding rule for every pixel extent.
int round_half_up(double v);

// Integer pixel run covered by an extent of length `length` centered at
// `center`: `count` = round_half_up(length) pixels starting at `start`, the
// first pixel center at or right of center - count/2.
struct PixelSpan {
  int start = 0;
  int count = 0;
};
PixelSpan pixel_span(double center, double length);

// Where a searching-area crop sits in its frame. `origin_*` is the top-left
// of the in-frame part of the crop (clamped into the frame); the pads count
// crop pixels that fall outside the frame on each side.
struct Placement {
  int origin_x = 0;
  int origin_y = 0;
  int crop_w = 0;
  int crop_h = 0;
  int pad_left = 0;
  int pad_top = 0;
  int pad_right = 0;
  int pad_bottom = 0;

  int inner_w() const { return crop_w - pad_left - pad_right; }
  int inner_h() const { return crop_h - pad_top - pad_bottom; }
  // Frame coordinate of crop pixel (0,0), possibly outside the frame.
  int crop_x0() const { return origin_x - pad_left; }
  int crop_y0() const { return origin_y - pad_top; }

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Computes the placement of the crop covering `bbox` scaled by `k` inside a
// width x height frame. Throws GeometryError on a zero-area crop.
Placement place_crop(const BoundingBox& bbox, double k, int width, int height);

struct SearchingArea {
  Frame patch;
  Placement placement;
  BoundingBox source_bbox;
  double k;

  // source_bbox expressed in patch coordinates.
  BoundingBox local_bbox() const {
    return source_bbox.translated(-placement.crop_x0(), -placement.crop_y0());
  }
};

// Crops round(k*w) x round(k*h) pixels around the box center. Pixels outside
// the frame take the per-channel frame mean.
SearchingArea crop_searching_area(const Frame& frame, const BoundingBox& bbox,
                                  double k);

// Mask counterpart of the crop: out-of-frame pixels are 0.
BinaryMask crop_mask(const BinaryMask& mask, const Placement& placement);

// Writes `map` into a zero W x H map at the placement; padded pixels are
// dropped. Throws ContractError when `map` does not have the crop size.
ProbMap paste_map(const ProbMap& map, const Placement& placement, int width,
                  int height);

// Tightest box around the positive pixels, inclusive pixel extents.
// Throws EmptyTargetError on an empty mask.
BoundingBox enclosing_bbox(const BinaryMask& mask);

// 1 on the pixel span of the box clipped to the frame.
BinaryMask rect_to_mask(const BoundingBox& bbox, int width, int height);

// 1 where the value is strictly greater than tau.
BinaryMask binarize(const ProbMap& map, double tau);

// Per-channel mean, rounded half-up.
Rgb mean_color(const Frame& frame);

}  // namespace segtrack
