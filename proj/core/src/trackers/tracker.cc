#include "segtrack/trackers/tracker.h"

#include <string>

#include "segtrack/error.h"
#include "segtrack/trackers/kcf.h"
#include "segtrack/trackers/ncc.h"

namespace segtrack {

void Tracker::init(const Frame& frame, const BoundingBox& bbox) {
  if (initialized()) throw UsageError(std::string(name()) + ": init() called twice");
  if (!rect_to_mask(bbox, frame.width(), frame.height()).any()) {
    throw GeometryError(std::string(name()) +
                        ": initial box does not overlap the frame");
  }
  do_init(frame, bbox);
  last_bbox_ = bbox;
}

BoundingBox Tracker::update(const Frame& frame) {
  if (!initialized()) {
    throw UsageError(std::string(name()) + ": update() before init()");
  }
  BoundingBox b = do_update(frame);
  last_bbox_ = b;
  return b;
}

void StaticTracker::do_init(const Frame&, const BoundingBox& bbox) { box_ = bbox; }

BoundingBox StaticTracker::do_update(const Frame&) { return *box_; }

OracleTracker::OracleTracker(std::vector<BinaryMask> feed)
    : feed_(std::move(feed)) {}

void OracleTracker::do_init(const Frame&, const BoundingBox& bbox) {
  cursor_ = 0;
  previous_ = bbox;
}

BoundingBox OracleTracker::do_update(const Frame&) {
  ++cursor_;
  if (cursor_ >= feed_.size()) {
    throw UsageError("oracle tracker: more frames than ground-truth masks");
  }
  if (feed_[cursor_].any()) previous_ = enclosing_bbox(feed_[cursor_]);
  return *previous_;
}

std::unique_ptr<Tracker> make_tracker(const ComponentSpec& spec,
                                      const std::vector<BinaryMask>* gt_feed) {
  if (spec.name == "static") return std::make_unique<StaticTracker>();
  if (spec.name == "oracle") {
    if (gt_feed == nullptr) {
      throw ConfigError("oracle tracker requires ground truth");
    }
    return std::make_unique<OracleTracker>(*gt_feed);
  }
  if (spec.name == "ncc") {
    return std::make_unique<NccTracker>(NccParams::from(spec.params));
  }
  if (spec.name == "kcf") {
    return std::make_unique<KcfTracker>(KcfParams::from(spec.params));
  }
  throw ConfigError("unknown tracker '" + spec.name +
                    "' (expected static, oracle, ncc or kcf)");
}

}  // namespace segtrack
