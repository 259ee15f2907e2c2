#pragma once

#include "segtrack/segmenters/segmenter.h"

namespace segtrack {

// Foreground/background color histograms with a foreground prior.
// Each histogram has bins_per_channel^3 bins, sums to 1 and is strictly
// positive.
class ColorModel {
 public:
  // Throws ContractError unless both histograms have bins_per_channel^3
  // entries, each sums to 1 +- 1e-9, all bins are > 0, and 0 < prior < 1.
  ColorModel(int bins_per_channel, std::vector<double> fg_hist,
             std::vector<double> bg_hist, double prior);

  // Builds smoothed histograms from raw counts: p = (1 - eps*B) * c/N + eps,
  // so every bin is at least eps. An empty count set becomes uniform.
  static ColorModel from_counts(int bins_per_channel,
                                const std::vector<double>& fg_counts,
                                const std::vector<double>& bg_counts,
                                double prior, double eps);

  int bins_per_channel() const { return bins_; }
  std::size_t bin_of(const Rgb& c) const;
  double fg(const Rgb& c) const { return fg_[bin_of(c)]; }
  double bg(const Rgb& c) const { return bg_[bin_of(c)]; }
  double prior() const { return prior_; }
  const std::vector<double>& fg_hist() const { return fg_; }
  const std::vector<double>& bg_hist() const { return bg_; }

 private:
  int bins_;
  std::vector<double> fg_;
  std::vector<double> bg_;
  double prior_;
};

// P(fg | c) = p_f(c) pi / (p_f(c) pi + p_b(c) (1 - pi)).
double color_posterior(const ColorModel& model, const Rgb& pixel);

struct ColorBayesParams {
  int bins = 16;
  double eps = 1e-6;
  // Template crop is this many times the first-frame box; the ring between
  // the box and this size is the background sample.
  double ring = 1.5;
  bool largest_component = true;
  TemplateMode mode = TemplateMode::CropWithMask;

  static ColorBayesParams from(const Params& params);
};

// Keeps the largest 4-connected group of pixels with value > tau and zeroes
// the other groups. Values <= tau are left alone. Ties go to the component
// found first in raster order.
ProbMap keep_largest_component(const ProbMap& map, double tau);

// Color-histogram Bayes segmenter. Learns fg colors from the first-frame
// mask (or the box for ImageCrop templates) and bg colors from the ring
// around the box, then scores each searching-area pixel by its posterior.
class ColorBayesSegmenter final : public Segmenter {
 public:
  explicit ColorBayesSegmenter(const ColorBayesParams& params = {});

  std::string_view name() const override { return "colorbayes"; }
  TemplateMode template_mode() const override { return params_.mode; }
  double template_context() const override { return params_.ring; }

  const std::optional<ColorModel>& model() const { return model_; }

 protected:
  void do_init(const Template& tmpl) override;
  ProbMap do_segment(const SearchingArea& sa) override;

 private:
  ColorBayesParams params_;
  std::optional<ColorModel> model_;
};

}  // namespace segtrack
