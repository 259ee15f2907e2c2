#pragma once

#include <optional>
#include <string_view>

#include "segtrack/core/geometry.h"

namespace segtrack {

// How a segmenter is conditioned on its target.
//  BboxChannel  - a binary channel marking the tracker box inside each
//                 searching area; rebuilt every frame.
//  ImageCrop    - an image crop of the first-frame target.
//  CropWithMask - the first-frame crop plus its ground-truth mask.
enum class TemplateMode : std::uint8_t {
  BboxChannel = 1,
  ImageCrop = 2,
  CropWithMask = 3,
};

std::string_view to_string(TemplateMode mode);
TemplateMode parse_template_mode(std::string_view name);

// Target-conditioning payload. `bbox` is expressed in the coordinates of the
// template crop; for BboxChannel (no crop) in a virtual crop of exactly the
// box's pixel span. `placement` records where the crop came from in frame 0.
class Template {
 public:
  static Template bbox_channel(const BoundingBox& frame_bbox);
  static Template image_crop(Frame crop, const BoundingBox& local_bbox,
                             Placement placement);
  static Template crop_with_mask(Frame crop, BinaryMask mask,
                                 const BoundingBox& local_bbox,
                                 Placement placement);

  TemplateMode mode() const { return mode_; }
  const std::optional<Frame>& crop() const { return crop_; }
  const std::optional<BinaryMask>& mask() const { return mask_; }
  const BoundingBox& bbox() const { return bbox_; }
  const std::optional<Placement>& placement() const { return placement_; }

  // Width/height of the crop (or the virtual crop for BboxChannel).
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  Template(TemplateMode mode, std::optional<Frame> crop,
           std::optional<BinaryMask> mask, const BoundingBox& bbox,
           std::optional<Placement> placement, int width, int height);

  TemplateMode mode_;
  std::optional<Frame> crop_;
  std::optional<BinaryMask> mask_;
  BoundingBox bbox_;
  std::optional<Placement> placement_;
  int width_;
  int height_;
};

// Builds the template a segmenter asks for from the first frame and its
// ground-truth mask. `context` >= 1 enlarges the crop around the
// ground-truth box (1 = the box itself).
Template build_template(TemplateMode mode, const Frame& frame,
                        const BinaryMask& gt_mask, double context = 1.0);

}  // namespace segtrack
