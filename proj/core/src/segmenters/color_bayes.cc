#include "segtrack/segmenters/color_bayes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

std::size_t bin_count(int bins) {
  return static_cast<std::size_t>(bins) * bins * bins;
}

void check_hist(const std::vector<double>& h, std::size_t n, const char* what) {
  if (h.size() != n) {
    throw ContractError(std::string("ColorModel: ") + what + " has " +
                        std::to_string(h.size()) + " bins, expected " +
                        std::to_string(n));
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ContractError(std::string("ColorModel: ") + what + " does not sum to 1");
  }
  if (std::any_of(h.begin(), h.end(), [](double v) { return !(v > 0.0); })) {
    throw ContractError(std::string("ColorModel: ") + what + " has an empty bin");
  }
}

std::vector<double> smooth(const std::vector<double>& counts, double eps) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double bins = static_cast<double>(counts.size());
  std::vector<double> p(counts.size());
  if (n <= 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / bins);
    return p;
  }
  const double mass = 1.0 - eps * bins;
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = mass * counts[i] / n + eps;
  // Renormalize so rounding never pushes the sum outside 1 +- 1e-9.
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

ColorModel::ColorModel(int bins_per_channel, std::vector<double> fg_hist,
                       std::vector<double> bg_hist, double prior)
    : bins_(bins_per_channel),
      fg_(std::move(fg_hist)),
      bg_(std::move(bg_hist)),
      prior_(prior) {
  if (bins_ < 1 || bins_ > 256) {
    throw ContractError("ColorModel: bins per channel must be in [1,256]");
  }
  check_hist(fg_, bin_count(bins_), "fg histogram");
  check_hist(bg_, bin_count(bins_), "bg histogram");
  if (!(prior_ > 0.0 && prior_ < 1.0)) {
    throw ContractError("ColorModel: prior must lie in (0,1)");
  }
}

ColorModel ColorModel::from_counts(int bins_per_channel,
                                   const std::vector<double>& fg_counts,
                                   const std::vector<double>& bg_counts,
                                   double prior, double eps) {
  if (!(eps > 0.0) || eps * bin_count(bins_per_channel) >= 1.0) {
    throw ParameterError("ColorModel: smoothing eps out of range");
  }
  return ColorModel(bins_per_channel, smooth(fg_counts, eps),
                    smooth(bg_counts, eps), prior);
}

std::size_t ColorModel::bin_of(const Rgb& c) const {
  const std::size_t r = static_cast<std::size_t>(c[0]) * bins_ / 256;
  const std::size_t g = static_cast<std::size_t>(c[1]) * bins_ / 256;
  const std::size_t b = static_cast<std::size_t>(c[2]) * bins_ / 256;
  return (r * bins_ + g) * bins_ + b;
}

double color_posterior(const ColorModel& model, const Rgb& pixel) {
  const double f = model.fg(pixel) * model.prior();
  const double b = model.bg(pixel) * (1.0 - model.prior());
  return f / (f + b);
}

ColorBayesParams ColorBayesParams::from(const Params& p) {
  ColorBayesParams c;
  c.bins = p.get_int("bins", c.bins);
  c.eps = p.get_double("eps", c.eps);
  c.ring = p.get_double("ring", c.ring);
  c.largest_component = p.get_bool("largest_component", c.largest_component);
  if (p.has("mode")) c.mode = parse_template_mode(p.get_string("mode", ""));
  if (c.bins < 1 || c.bins > 256) throw ConfigError("colorbayes: bins must be in [1,256]");
  if (!(c.ring > 1.0)) throw ConfigError("colorbayes: ring must be > 1");
  if (c.mode == TemplateMode::BboxChannel) {
    throw ConfigError("colorbayes needs an image-crop or crop-with-mask template");
  }
  if (!(c.eps > 0.0) || c.eps * bin_count(c.bins) >= 1.0) {
    throw ConfigError("colorbayes: eps out of range for the bin count");
  }
  return c;
}

ProbMap keep_largest_component(const ProbMap& map, double tau) {
  const int w = map.width();
  const int h = map.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
  std::vector<int> stack;
  int best_label = 0;
  std::size_t best_size = 0;
  int next = 0;
  for (int start = 0; start < w * h; ++start) {
    if (label[start] != 0 || !(map.values()[start] > tau)) continue;
    ++next;
    std::size_t size = 0;
    stack.push_back(start);
    label[start] = next;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      ++size;
      const int x = i % w;
      const int y = i / w;
      const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& n : nbrs) {
        if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
        const int j = n[1] * w + n[0];
        if (label[j] == 0 && map.values()[j] > tau) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = next;
    }
  }
  std::vector<float> out(map.values().begin(), map.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (label[i] != 0 && label[i] != best_label) out[i] = 0.0F;
  }
  return ProbMap(w, h, std::move(out));
}

ColorBayesSegmenter::ColorBayesSegmenter(const ColorBayesParams& params)
    : params_(params) {}

void ColorBayesSegmenter::do_init(const Template& tmpl) {
  const Frame& crop = *tmpl.crop();
  const PixelSpan sx = pixel_span(tmpl.bbox().cx(), tmpl.bbox().w());
  const PixelSpan sy = pixel_span(tmpl.bbox().cy(), tmpl.bbox().h());
  auto in_box = [&](int x, int y) {
    return x >= sx.start && x < sx.start + sx.count && y >= sy.start &&
           y < sy.start + sy.count;
  };
  // Pixels copied from outside frame 0 carry the fill color, not real
  // background; they are not sampled.
  auto in_frame = [&](int x, int y) {
    if (!tmpl.placement()) return true;
    const Placement& pl = *tmpl.placement();
    return x >= pl.pad_left && x < pl.crop_w - pl.pad_right && y >= pl.pad_top &&
           y < pl.crop_h - pl.pad_bottom;
  };
  std::vector<double> fg(bin_count(params_.bins), 0.0);
  std::vector<double> bg(bin_count(params_.bins), 0.0);
  const ColorModel probe = ColorModel::from_counts(params_.bins, fg, bg, 0.5,
                                                   params_.eps);
  double fg_area = 0.0;
  for (int y = 0; y < crop.height(); ++y) {
    for (int x = 0; x < crop.width(); ++x) {
      if (!in_frame(x, y)) continue;
      const std::size_t bin = probe.bin_of(crop.at(x, y));
      const bool is_fg = tmpl.mask() ? tmpl.mask()->at(x, y) != 0 : in_box(x, y);
      if (is_fg) {
        fg[bin] += 1.0;
        fg_area += 1.0;
      } else if (!in_box(x, y)) {
        bg[bin] += 1.0;
      }
    }
  }
  const double area = static_cast<double>(crop.width()) * crop.height();
  const double prior = std::clamp(fg_area / area, 1e-3, 1.0 - 1e-3);
  model_ = ColorModel::from_counts(params_.bins, fg, bg, prior, params_.eps);
}

ProbMap ColorBayesSegmenter::do_segment(const SearchingArea& sa) {
  ProbMap out(sa.patch.width(), sa.patch.height());
  for (int y = 0; y < sa.patch.height(); ++y) {
    for (int x = 0; x < sa.patch.width(); ++x) {
      out.set(x, y, static_cast<float>(color_posterior(*model_, sa.patch.at(x, y))));
    }
  }
  return params_.largest_component ? keep_largest_component(out, 0.5) : out;
}

}  // namespace segtrack
