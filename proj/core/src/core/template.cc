#include "segtrack/core/template.h"

#include <string>

#include "segtrack/error.h"

namespace segtrack {

std::string_view to_string(TemplateMode mode) {
  switch (mode) {
    case TemplateMode::BboxChannel:
      return "bbox-channel";
    case TemplateMode::ImageCrop:
      return "image-crop";
    case TemplateMode::CropWithMask:
      return "crop-with-mask";
  }
  return "unknown";
}

TemplateMode parse_template_mode(std::string_view name) {
  if (name == "bbox-channel") return TemplateMode::BboxChannel;
  if (name == "image-crop") return TemplateMode::ImageCrop;
  if (name == "crop-with-mask") return TemplateMode::CropWithMask;
  throw ConfigError("unknown template mode '" + std::string(name) +
                    "' (expected bbox-channel, image-crop or crop-with-mask)");
}

Template::Template(TemplateMode mode, std::optional<Frame> crop,
                   std::optional<BinaryMask> mask, const BoundingBox& bbox,
                   std::optional<Placement> placement, int width, int height)
    : mode_(mode),
      crop_(std::move(crop)),
      mask_(std::move(mask)),
      bbox_(bbox),
      placement_(placement),
      width_(width),
      height_(height) {}

Template Template::bbox_channel(const BoundingBox& frame_bbox) {
  const PixelSpan sx = pixel_span(frame_bbox.cx(), frame_bbox.w());
  const PixelSpan sy = pixel_span(frame_bbox.cy(), frame_bbox.h());
  if (sx.count == 0 || sy.count == 0) {
    throw GeometryError("bbox-channel template: box rounds to zero area");
  }
  return Template(TemplateMode::BboxChannel, std::nullopt, std::nullopt,
                  frame_bbox.translated(-sx.start, -sy.start), std::nullopt,
                  sx.count, sy.count);
}

Template Template::image_crop(Frame crop, const BoundingBox& local_bbox,
                              Placement placement) {
  if (crop.empty()) throw ContractError("image-crop template needs a crop");
  const int w = crop.width();
  const int h = crop.height();
  return Template(TemplateMode::ImageCrop, std::move(crop), std::nullopt,
                  local_bbox, placement, w, h);
}

Template Template::crop_with_mask(Frame crop, BinaryMask mask,
                                  const BoundingBox& local_bbox,
                                  Placement placement) {
  if (crop.empty()) throw ContractError("crop-with-mask template needs a crop");
  if (mask.width() != crop.width() || mask.height() != crop.height()) {
    throw ContractError("crop-with-mask template: mask and crop sizes differ");
  }
  const int w = crop.width();
  const int h = crop.height();
  return Template(TemplateMode::CropWithMask, std::move(crop), std::move(mask),
                  local_bbox, placement, w, h);
}

Template build_template(TemplateMode mode, const Frame& frame,
                        const BinaryMask& gt_mask, double context) {
  if (gt_mask.width() != frame.width() || gt_mask.height() != frame.height()) {
    throw ContractError("build_template: mask and frame sizes differ");
  }
  const BoundingBox box = enclosing_bbox(gt_mask);
  if (mode == TemplateMode::BboxChannel) return Template::bbox_channel(box);

  SearchingArea sa = crop_searching_area(frame, box, context);
  const BoundingBox local = sa.local_bbox();
  if (mode == TemplateMode::ImageCrop) {
    return Template::image_crop(std::move(sa.patch), local, sa.placement);
  }
  BinaryMask mask = crop_mask(gt_mask, sa.placement);
  return Template::crop_with_mask(std::move(sa.patch), std::move(mask), local,
                                  sa.placement);
}

}  // namespace segtrack
