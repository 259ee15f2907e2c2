#include "segtrack/segmenters/segmenter.h"

#include <string>

#include "segtrack/error.h"
#include "segtrack/segmenters/color_bayes.h"
#include "segtrack/segmenters/external.h"

namespace segtrack {

void Segmenter::init(const Template& tmpl) {
  if (tmpl.mode() != template_mode()) {
    throw ContractError(std::string(name()) + " expects a " +
                        std::string(to_string(template_mode())) +
                        " template, got " + std::string(to_string(tmpl.mode())));
  }
  do_init(tmpl);
  initialized_ = true;
}

ProbMap Segmenter::segment(const SearchingArea& sa) {
  if (!initialized_ && template_mode() != TemplateMode::BboxChannel) {
    throw UsageError(std::string(name()) + ": segment() before init()");
  }
  ProbMap map = do_segment(sa);
  if (map.width() != sa.patch.width() || map.height() != sa.patch.height()) {
    throw ContractError(std::string(name()) +
                        ": segmentation size differs from the searching area");
  }
  return map;
}

ProbMap RectFillSegmenter::do_segment(const SearchingArea& sa) {
  // Spans are computed in frame coordinates and shifted by the integer crop
  // offset so the result matches rect_to_mask on the full frame exactly.
  const PixelSpan sx = pixel_span(sa.source_bbox.cx(), sa.source_bbox.w());
  const PixelSpan sy = pixel_span(sa.source_bbox.cy(), sa.source_bbox.h());
  const Placement& pl = sa.placement;
  ProbMap out(pl.crop_w, pl.crop_h);
  const int x0 = std::max(sx.start - pl.crop_x0(), 0);
  const int x1 = std::min(sx.start + sx.count - pl.crop_x0(), pl.crop_w);
  const int y0 = std::max(sy.start - pl.crop_y0(), 0);
  const int y1 = std::min(sy.start + sy.count - pl.crop_y0(), pl.crop_h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) out.set(x, y, 1.0F);
  }
  return out;
}

OracleSegmenter::OracleSegmenter(std::vector<BinaryMask> feed)
    : feed_(std::move(feed)) {}

void OracleSegmenter::do_init(const Template&) { cursor_ = 0; }

ProbMap OracleSegmenter::do_segment(const SearchingArea& sa) {
  ++cursor_;
  if (cursor_ >= feed_.size()) {
    throw UsageError("oracle segmenter: more frames than ground-truth masks");
  }
  return to_prob_map(crop_mask(feed_[cursor_], sa.placement));
}

std::unique_ptr<Segmenter> make_segmenter(const ComponentSpec& spec,
                                          const std::vector<BinaryMask>* gt_feed) {
  if (spec.name == "rect") return std::make_unique<RectFillSegmenter>();
  if (spec.name == "oracle") {
    if (gt_feed == nullptr) {
      throw ConfigError("oracle segmenter requires ground truth");
    }
    return std::make_unique<OracleSegmenter>(*gt_feed);
  }
  if (spec.name == "colorbayes") {
    return std::make_unique<ColorBayesSegmenter>(ColorBayesParams::from(spec.params));
  }
  if (spec.name == "external") {
    return ExternalSegmenter::connect(ExternalParams::from(spec.params));
  }
  throw ConfigError("unknown segmenter '" + spec.name +
                    "' (expected rect, oracle, colorbayes or external)");
}

}  // namespace segtrack
