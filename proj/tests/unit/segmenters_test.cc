#include <gtest/gtest.h>

#include <random>

#include "segtrack/bench/synthetic.h"
#include "segtrack/error.h"
#include "segtrack/metrics/mask_metrics.h"
#include "segtrack/pipeline/pipeline.h"
#include "segtrack/segmenters/color_bayes.h"
#include "segtrack/trackers/tracker.h"
#include "test_util.h"

namespace segtrack {
namespace {

TEST(Property, RectFillPastesToRectMask) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> cx(5, 75), cy(5, 55), side(1, 10), kk(1, 3);
  const Frame f(80, 60, Rgb{9, 9, 9});
  RectFillSegmenter seg;
  for (int i = 0; i < 1000; ++i) {
    const BoundingBox b(cx(rng), cy(rng), side(rng), side(rng));
    const SearchingArea sa = crop_searching_area(f, b, kk(rng));
    const BinaryMask m = binarize(paste_map(seg.segment(sa), sa.placement, 80, 60), 0.5);
    ASSERT_EQ(m, rect_to_mask(b, 80, 60)) << b;
  }
}

TEST(Segmenter, ModeMismatchAndOrder) {
  const Frame f(20, 20, Rgb{1, 2, 3});
  const BinaryMask m = rect_to_mask(BoundingBox(10, 10, 4, 4), 20, 20);
  ColorBayesSegmenter cb;
  EXPECT_THROW(cb.init(Template::bbox_channel(BoundingBox(10, 10, 4, 4))), ContractError);
  EXPECT_THROW(cb.segment(crop_searching_area(f, BoundingBox(10, 10, 4, 4), 1.5)), UsageError);
  RectFillSegmenter rect;
  EXPECT_NO_THROW(rect.segment(crop_searching_area(f, BoundingBox(10, 10, 4, 4), 1.5)));
  EXPECT_THROW(rect.init(build_template(TemplateMode::CropWithMask, f, m)), ContractError);
}

TEST(Segmenter, FactoryErrors) {
  EXPECT_THROW(make_segmenter({"oracle", {}}, nullptr), ConfigError);
  EXPECT_THROW(make_segmenter({"sam", {}}, nullptr), ConfigError);
  Params p;
  p.set("bins", "0");
  EXPECT_THROW(make_segmenter({"colorbayes", p}, nullptr), ConfigError);
}

TEST(OracleSegmenter, ReturnsCroppedTruth) {
  std::mt19937_64 rng(42);
  std::vector<BinaryMask> gt;
  for (int t = 0; t < 4; ++t) gt.push_back(testing::random_mask(rng, 30, 20, 0.3));
  gt[0] = rect_to_mask(BoundingBox(10, 10, 5, 5), 30, 20);
  OracleSegmenter seg(gt);
  const Frame f(30, 20);
  seg.init(build_template(TemplateMode::CropWithMask, f, gt[0]));
  for (int t = 1; t < 4; ++t) {
    const SearchingArea sa = crop_searching_area(f, BoundingBox(12, 9, 8, 6), 2.0);
    const BinaryMask got = binarize(seg.segment(sa), 0.5);
    EXPECT_EQ(got, crop_mask(gt[t], sa.placement));
  }
  EXPECT_THROW(seg.segment(crop_searching_area(f, BoundingBox(12, 9, 8, 6), 2.0)), UsageError);
}

TEST(ColorModel, PosteriorExamples) {
  // Two bins per channel: bin 0 holds dark colors, bin 7 bright ones.
  std::vector<double> fg(8, 0.05), bg(8, 0.05);
  fg[7] = 0.65;
  bg[0] = 0.65;
  const ColorModel m(2, fg, bg, 0.3);
  EXPECT_EQ(m.bin_of({0, 0, 0}), 0U);
  EXPECT_EQ(m.bin_of({255, 255, 255}), 7U);
  EXPECT_EQ(m.bin_of({128, 0, 127}), 4U);
  EXPECT_NEAR(color_posterior(m, {255, 255, 255}), 0.65 * 0.3 / (0.65 * 0.3 + 0.05 * 0.7), 1e-12);
  EXPECT_NEAR(color_posterior(m, {0, 0, 0}), 0.05 * 0.3 / (0.05 * 0.3 + 0.65 * 0.7), 1e-12);
  EXPECT_NEAR(color_posterior(m, {200, 10, 10}), 0.3, 1e-12);
}

TEST(ColorModel, RejectsBadHistograms) {
  EXPECT_THROW(ColorModel(2, std::vector<double>(8, 0.125), std::vector<double>(7, 1.0 / 7), 0.5),
               ContractError);
  std::vector<double> zero(8, 1.0 / 7);
  zero[0] = 0;
  EXPECT_THROW(ColorModel(2, zero, std::vector<double>(8, 0.125), 0.5), ContractError);
  EXPECT_THROW(ColorModel(2, std::vector<double>(8, 0.125), std::vector<double>(8, 0.125), 1.0),
               ContractError);
}

TEST(ColorModel, SmoothedCountsArePositive) {
  std::vector<double> fc(8, 0), bc(8, 0);
  fc[3] = 10;
  const ColorModel m = ColorModel::from_counts(2, fc, bc, 0.5, 1e-3);
  double s = 0;
  for (double v : m.fg_hist()) {
    EXPECT_GE(v, 1e-3);
    s += v;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(m.fg_hist()[3], (1 - 8e-3) + 1e-3, 1e-12);
  for (double v : m.bg_hist()) EXPECT_NEAR(v, 0.125, 1e-12);
}

TEST(ColorBayes, SeparatesRedFromBlue) {
  Frame f(60, 40, Rgb{0, 0, 255});
  const BoundingBox box(30, 20, 12, 10);
  const BinaryMask m = rect_to_mask(box, 60, 40);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 60; ++x) {
      if (m.at(x, y)) f.set(x, y, {255, 0, 0});
    }
  }
  ColorBayesSegmenter seg;
  seg.init(build_template(seg.template_mode(), f, m, seg.template_context()));
  const SearchingArea sa = crop_searching_area(f, box, 2.0);
  const ProbMap p = paste_map(seg.segment(sa), sa.placement, 60, 40);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 60; ++x) {
      const bool inside_crop = x >= sa.placement.crop_x0() &&
                               x < sa.placement.crop_x0() + sa.placement.crop_w &&
                               y >= sa.placement.crop_y0() &&
                               y < sa.placement.crop_y0() + sa.placement.crop_h;
      if (!inside_crop) continue;
      if (m.at(x, y)) {
        EXPECT_GT(p.at(x, y), 0.99F);
      } else {
        EXPECT_LT(p.at(x, y), 0.01F);
      }
    }
  }
}

TEST(ColorBayes, HighIouOnSyntheticSequence) {
  SyntheticSpec s;
  s.shape = Shape::Ellipse;
  s.obj_w = 26;
  s.obj_h = 18;
  const Sequence seq = gen_synthetic(s);
  OracleTracker tr(seq.gt_masks(1));
  ColorBayesSegmenter seg;
  const RunRecord r = run_sequence(tr, seg, seq, 1, PipelineConfig{});
  double j = 0;
  for (const auto& f : r.frames) j += iou(f.mask, seq.gt_masks(1)[f.index]);
  EXPECT_GE(j / static_cast<double>(r.frames.size()), 0.95);
}

TEST(LargestComponent, KeepsBiggestBlob) {
  ProbMap m(6, 3);
  m.set(0, 0, 0.9F);
  m.set(3, 1, 0.8F);
  m.set(4, 1, 0.7F);
  m.set(5, 2, 0.2F);
  const ProbMap k = keep_largest_component(m, 0.5);
  EXPECT_EQ(k.at(0, 0), 0.0F);
  EXPECT_EQ(k.at(3, 1), 0.8F);
  EXPECT_EQ(k.at(4, 1), 0.7F);
  EXPECT_EQ(k.at(5, 2), 0.2F);
}

}  // namespace
}  // namespace segtrack
