#pragma once

#include "segtrack/trackers/fft.h"
#include "segtrack/trackers/tracker.h"

namespace segtrack {

struct NccParams {
  // Exhaustive search half-width, in working-resolution pixels.
  int search_radius = 16;
  // The template is downscaled so its longer side is at most this many
  // pixels; smaller targets are matched at full resolution.
  int max_template_side = 64;

  static NccParams from(const Params& params);
};

// Zero-mean normalized cross-correlation of `tmpl` against `image` at
// offset (ox, oy) (top-left of the template in image coordinates). A flat
// window or template scores 0.
double ncc_score(const RealGrid& image, const RealGrid& tmpl, int ox, int oy);

// Fixed-template NCC tracker: the first-frame box appearance is matched
// exhaustively over +-search_radius around the last position. Box size
// never changes.
class NccTracker final : public Tracker {
 public:
  explicit NccTracker(const NccParams& params = {});

  std::string_view name() const override { return "ncc"; }

 protected:
  void do_init(const Frame& frame, const BoundingBox& bbox) override;
  BoundingBox do_update(const Frame& frame) override;

 private:
  RealGrid extract(const Frame& frame, const BoundingBox& box, int width,
                   int height) const;

  NccParams params_;
  double scale_ = 1.0;
  RealGrid template_;
  std::optional<BoundingBox> box_;
};

}  // namespace segtrack
