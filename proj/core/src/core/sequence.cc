#include "segtrack/core/sequence.h"

#include "segtrack/error.h"

namespace segtrack {

Sequence::Sequence(std::string name, std::vector<Frame> frames,
                   std::map<ObjectId, std::vector<BinaryMask>> gt_masks)
    : name_(std::move(name)),
      frames_(std::move(frames)),
      gt_masks_(std::move(gt_masks)) {
  if (frames_.empty()) throw DataError(name_ + ": sequence has no frames");
  const int w = frames_.front().width();
  const int h = frames_.front().height();
  for (std::size_t t = 0; t < frames_.size(); ++t) {
    if (frames_[t].width() != w || frames_[t].height() != h) {
      throw DataError(name_ + ": frame " + std::to_string(t) +
                      " has a different size than frame 0");
    }
  }
  for (const auto& [id, masks] : gt_masks_) {
    if (masks.size() != frames_.size()) {
      throw DataError(name_ + ": object " + std::to_string(id) + " has " +
                      std::to_string(masks.size()) + " masks for " +
                      std::to_string(frames_.size()) + " frames");
    }
    auto& boxes = gt_boxes_[id];
    boxes.reserve(masks.size());
    for (std::size_t t = 0; t < masks.size(); ++t) {
      if (masks[t].width() != w || masks[t].height() != h) {
        throw DataError(name_ + ": mask " + std::to_string(t) + " of object " +
                        std::to_string(id) + " does not match the frame size");
      }
      if (masks[t].any()) {
        boxes.emplace_back(enclosing_bbox(masks[t]));
      } else {
        boxes.emplace_back(std::nullopt);
      }
    }
  }
}

std::vector<ObjectId> Sequence::object_ids() const {
  std::vector<ObjectId> ids;
  ids.reserve(gt_masks_.size());
  for (const auto& entry : gt_masks_) ids.push_back(entry.first);
  return ids;
}

const std::vector<BinaryMask>& Sequence::gt_masks(ObjectId id) const {
  auto it = gt_masks_.find(id);
  if (it == gt_masks_.end()) {
    throw ContractError(name_ + ": no object with id " + std::to_string(id));
  }
  return it->second;
}

std::optional<BoundingBox> Sequence::gt_box(ObjectId id, std::size_t t) const {
  auto it = gt_boxes_.find(id);
  if (it == gt_boxes_.end()) {
    throw ContractError(name_ + ": no object with id " + std::to_string(id));
  }
  return it->second.at(t);
}

Sequence Sequence::slice(std::size_t first, std::size_t count,
                         bool reverse) const {
  if (count == 0 || first >= frames_.size() ||
      (!reverse && first + count > frames_.size()) ||
      (reverse && count > first + 1)) {
    throw ContractError(name_ + ": slice out of range");
  }
  auto index = [&](std::size_t i) { return reverse ? first - i : first + i; };
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) frames.push_back(frames_[index(i)]);
  std::map<ObjectId, std::vector<BinaryMask>> masks;
  for (const auto& [id, all] : gt_masks_) {
    auto& out = masks[id];
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(all[index(i)]);
  }
  return Sequence(name_, std::move(frames), std::move(masks));
}

}  // namespace segtrack
