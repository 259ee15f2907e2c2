#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segtrack/core/geometry.h"

namespace segtrack {

using ObjectId = int;

// A video with per-object ground truth. Every object has one mask per frame;
// an absent object has an empty mask on that frame.
class Sequence {
 public:
  // Validates that all frames share one size and every object has one mask
  // of that size per frame. Throws DataError otherwise.
  Sequence(std::string name, std::vector<Frame> frames,
           std::map<ObjectId, std::vector<BinaryMask>> gt_masks);

  const std::string& name() const { return name_; }
  std::size_t size() const { return frames_.size(); }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }

  const std::vector<Frame>& frames() const { return frames_; }
  const Frame& frame(std::size_t t) const { return frames_.at(t); }

  std::vector<ObjectId> object_ids() const;
  bool has_object(ObjectId id) const { return gt_masks_.count(id) != 0; }
  const std::vector<BinaryMask>& gt_masks(ObjectId id) const;
  // Enclosing box of the object's mask on frame t; nullopt if absent.
  std::optional<BoundingBox> gt_box(ObjectId id, std::size_t t) const;

  // Frames [first, first + count) in order, or reversed when `reverse` is
  // set (then frames first, first-1, ..., first-count+1).
  Sequence slice(std::size_t first, std::size_t count, bool reverse) const;

 private:
  std::string name_;
  std::vector<Frame> frames_;
  std::map<ObjectId, std::vector<BinaryMask>> gt_masks_;
  std::map<ObjectId, std::vector<std::optional<BoundingBox>>> gt_boxes_;
};

}  // namespace segtrack
