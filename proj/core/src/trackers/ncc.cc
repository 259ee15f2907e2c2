#include "segtrack/trackers/ncc.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "segtrack/error.h"

namespace segtrack {

NccParams NccParams::from(const Params& p) {
  NccParams n;
  n.search_radius = p.get_int("search_radius", n.search_radius);
  n.max_template_side = p.get_int("max_template_side", n.max_template_side);
  if (n.search_radius < 0) throw ConfigError("ncc: search_radius must be >= 0");
  if (n.max_template_side < 1) {
    throw ConfigError("ncc: max_template_side must be >= 1");
  }
  return n;
}

double ncc_score(const RealGrid& image, const RealGrid& tmpl, int ox, int oy) {
  const int tw = tmpl.width();
  const int th = tmpl.height();
  const double n = static_cast<double>(tw) * th;
  double sum_i = 0.0, sum_t = 0.0;
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) {
      sum_i += image.at(ox + x, oy + y);
      sum_t += tmpl.at(x, y);
    }
  }
  const double mean_i = sum_i / n;
  const double mean_t = sum_t / n;
  double cross = 0.0, var_i = 0.0, var_t = 0.0;
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) {
      const double a = image.at(ox + x, oy + y) - mean_i;
      const double b = tmpl.at(x, y) - mean_t;
      cross += a * b;
      var_i += a * a;
      var_t += b * b;
    }
  }
  const double denom = std::sqrt(var_i * var_t);
  return denom < 1e-12 ? 0.0 : cross / denom;
}

NccTracker::NccTracker(const NccParams& params) : params_(params) {}

RealGrid NccTracker::extract(const Frame& frame, const BoundingBox& box,
                             int width, int height) const {
  const SearchingArea sa = crop_searching_area(frame, box, 1.0);
  Frame patch = resize_bilinear(sa.patch, width, height);
  const std::vector<double> luma = to_luma(patch);
  RealGrid g(width, height);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = luma[i];
  return g;
}

void NccTracker::do_init(const Frame& frame, const BoundingBox& bbox) {
  const PixelSpan sx = pixel_span(bbox.cx(), bbox.w());
  const PixelSpan sy = pixel_span(bbox.cy(), bbox.h());
  if (sx.count == 0 || sy.count == 0) {
    throw GeometryError("ncc: target box rounds to zero pixels");
  }
  scale_ = std::min(1.0, static_cast<double>(params_.max_template_side) /
                             std::max(sx.count, sy.count));
  const int tw = std::max(1, round_half_up(sx.count * scale_));
  const int th = std::max(1, round_half_up(sy.count * scale_));
  template_ = extract(frame, bbox, tw, th);
  box_ = bbox;
}

BoundingBox NccTracker::do_update(const Frame& frame) {
  const int r = params_.search_radius;
  const int tw = template_.width();
  const int th = template_.height();
  const BoundingBox region(box_->cx(), box_->cy(), (tw + 2 * r) / scale_,
                           (th + 2 * r) / scale_);
  const RealGrid search = extract(frame, region, tw + 2 * r, th + 2 * r);
  double best = -std::numeric_limits<double>::infinity();
  int best_dx = 0, best_dy = 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double s = ncc_score(search, template_, r + dx, r + dy);
      // Strictly greater keeps the first maximum; ties between equal scores
      // prefer the smaller displacement.
      const bool better =
          s > best || (s == best && std::abs(dx) + std::abs(dy) <
                                        std::abs(best_dx) + std::abs(best_dy));
      if (better) {
        best = s;
        best_dx = dx;
        best_dy = dy;
      }
    }
  }
  box_ = box_->translated(best_dx / scale_, best_dy / scale_);
  return *box_;
}

}  // namespace segtrack
