#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "segtrack/core/geometry.h"
#include "segtrack/params.h"

namespace segtrack {

// Bounding-box tracker: initialized once with the first frame and its
// ground-truth box, then asked for a box on every following frame.
//
// init() and update() enforce the call order; subclasses implement
// do_init()/do_update(). Instances are single-threaded.
class Tracker {
 public:
  virtual ~Tracker() = default;

  virtual std::string_view name() const = 0;
  // True for trackers that read ground truth after the first frame.
  virtual bool uses_ground_truth() const { return false; }

  // Throws UsageError on a second call, GeometryError if the box does not
  // overlap the frame.
  void init(const Frame& frame, const BoundingBox& bbox);
  // Throws UsageError before init().
  BoundingBox update(const Frame& frame);

  bool initialized() const { return last_bbox_.has_value(); }
  const std::optional<BoundingBox>& last_bbox() const { return last_bbox_; }

 protected:
  virtual void do_init(const Frame& frame, const BoundingBox& bbox) = 0;
  virtual BoundingBox do_update(const Frame& frame) = 0;

 private:
  std::optional<BoundingBox> last_bbox_;
};

// Reports the initial box forever.
class StaticTracker final : public Tracker {
 public:
  std::string_view name() const override { return "static"; }

 protected:
  void do_init(const Frame& frame, const BoundingBox& bbox) override;
  BoundingBox do_update(const Frame& frame) override;

 private:
  std::optional<BoundingBox> box_;
};

// Returns the box enclosing the ground-truth mask of each frame, in the order
// the frames are presented (`feed[0]` belongs to the init frame). On frames
// where the object is absent it repeats its previous box.
class OracleTracker final : public Tracker {
 public:
  explicit OracleTracker(std::vector<BinaryMask> feed);

  std::string_view name() const override { return "oracle"; }
  bool uses_ground_truth() const override { return true; }

 protected:
  void do_init(const Frame& frame, const BoundingBox& bbox) override;
  BoundingBox do_update(const Frame& frame) override;

 private:
  std::vector<BinaryMask> feed_;
  std::size_t cursor_ = 0;
  std::optional<BoundingBox> previous_;
};

// Creates a tracker by name ("static", "oracle", "ncc", "kcf"). The oracle
// needs `gt_feed`. Throws ConfigError on unknown names or bad parameters.
std::unique_ptr<Tracker> make_tracker(const ComponentSpec& spec,
                                      const std::vector<BinaryMask>* gt_feed);

}  // namespace segtrack
