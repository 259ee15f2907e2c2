#include "segtrack/trackers/kcf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

double squared_norm(const RealGrid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * g[i];
  return s;
}

// Parseval: sum |x|^2 = sum |x_hat|^2 / n.
double squared_norm(const ComplexGrid& spectrum) {
  double s = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) s += std::norm(spectrum[i]);
  return s / static_cast<double>(spectrum.size());
}

RealGrid gaussian_kernel_from_correlation(const RealGrid& c, double xx,
                                          double zz, double sigma) {
  const double n = static_cast<double>(c.size());
  RealGrid k(c.width(), c.height());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = std::max(0.0, xx + zz - 2.0 * c[i]) / n;
    k[i] = std::exp(-d / (sigma * sigma));
  }
  return k;
}

RealGrid resample(const std::vector<double>& src, int sw, int sh, int dw,
                  int dh) {
  RealGrid out(dw, dh);
  const double scale_x = static_cast<double>(sw) / dw;
  const double scale_y = static_cast<double>(sh) / dh;
  for (int y = 0; y < dh; ++y) {
    const double fy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0, sh - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, sh - 1);
    const double wy = fy - y0;
    for (int x = 0; x < dw; ++x) {
      const double fx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0, sw - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, sw - 1);
      const double wx = fx - x0;
      auto at = [&](int xx, int yy) {
        return src[static_cast<std::size_t>(yy) * sw + xx];
      };
      const double top = at(x0, y0) + (at(x1, y0) - at(x0, y0)) * wx;
      const double bottom = at(x0, y1) + (at(x1, y1) - at(x0, y1)) * wx;
      out.at(x, y) = top + (bottom - top) * wy;
    }
  }
  return out;
}

// Vertex offset of the parabola through (-1, l), (0, c), (1, r).
double parabolic_offset(double l, double c, double r) {
  const double denom = l - 2.0 * c + r;
  if (std::abs(denom) < 1e-12) return 0.0;
  return std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
}

const KcfParams& validated(const KcfParams& p) {
  p.validate();
  return p;
}

}  // namespace

RealGrid kernel_correlation(const RealGrid& x, const RealGrid& z, double sigma) {
  if (!(sigma > 0.0)) {
    throw ParameterError("kernel_correlation: sigma must be > 0");
  }
  if (!x.same_shape(z) || x.size() == 0) {
    throw ContractError("kernel_correlation: patches must have the same shape");
  }
  const ComplexGrid xf = fft2(x);
  const ComplexGrid zf = fft2(z);
  ComplexGrid prod(x.width(), x.height());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(xf[i]) * zf[i];
  const RealGrid c = ifft2_real(prod);
  return gaussian_kernel_from_correlation(c, squared_norm(x), squared_norm(z),
                                          sigma);
}

RealGrid cosine_window(int width, int height) {
  RealGrid w(width, height);
  auto hann = [](int i, int n) {
    if (n == 1) return 1.0;
    return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) w.at(x, y) = hann(x, width) * hann(y, height);
  }
  return w;
}

RealGrid gaussian_target(int width, int height, double sigma) {
  RealGrid y(width, height);
  for (int r = 0; r < height; ++r) {
    const int dy = r < (height + 1) / 2 ? r : r - height;
    for (int c = 0; c < width; ++c) {
      const int dx = c < (width + 1) / 2 ? c : c - width;
      y.at(c, r) = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
    }
  }
  return y;
}

void KcfParams::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("kcf: lambda must be > 0");
  if (!(sigma > 0.0)) throw ConfigError("kcf: sigma must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("kcf: eta must be in (0,1]");
  if (!(padding >= 0.0)) throw ConfigError("kcf: padding must be >= 0");
  if (!(out_sigma_factor > 0.0)) {
    throw ConfigError("kcf: out_sigma_factor must be > 0");
  }
  if (resolution < 4) throw ConfigError("kcf: resolution must be >= 4");
}

KcfParams KcfParams::from(const Params& p) {
  KcfParams k;
  k.lambda = p.get_double("lambda", k.lambda);
  k.sigma = p.get_double("sigma", k.sigma);
  k.eta = p.get_double("eta", k.eta);
  k.padding = p.get_double("padding", k.padding);
  k.out_sigma_factor = p.get_double("out_sigma_factor", k.out_sigma_factor);
  k.resolution = p.get_int("resolution", k.resolution);
  k.validate();
  return k;
}

KcfModel::KcfModel(int width, int height, const KcfParams& params)
    : width_(width), height_(height), params_(params) {
  params_.validate();
  if (width < 1 || height < 1) throw ContractError("KcfModel: empty patch size");
  // Target bandwidth scales with the object, which spans 1/(1+padding) of
  // the patch.
  const double out_sigma = std::sqrt(static_cast<double>(width) * height) *
                           params_.out_sigma_factor / (1.0 + params_.padding);
  y_hat_ = fft2(gaussian_target(width, height, out_sigma));
}

void KcfModel::check_shape(const RealGrid& patch) const {
  if (patch.width() != width_ || patch.height() != height_) {
    throw ContractError("KcfModel: patch is " + std::to_string(patch.width()) +
                        "x" + std::to_string(patch.height()) +
                        ", model expects " + std::to_string(width_) + "x" +
                        std::to_string(height_));
  }
}

ComplexGrid KcfModel::kernel_spectrum(const ComplexGrid& x_hat,
                                      const ComplexGrid& z_hat) const {
  ComplexGrid prod(width_, height_);
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(x_hat[i]) * z_hat[i];
  const RealGrid c = ifft2_real(prod);
  return fft2(gaussian_kernel_from_correlation(c, squared_norm(x_hat),
                                               squared_norm(z_hat), params_.sigma));
}

void KcfModel::train(const RealGrid& patch) {
  check_shape(patch);
  const ComplexGrid x_hat = fft2(patch);
  const ComplexGrid k_hat = kernel_spectrum(x_hat, x_hat);
  ComplexGrid alpha_hat(width_, height_);
  for (std::size_t i = 0; i < alpha_hat.size(); ++i) {
    alpha_hat[i] = y_hat_[i] / (k_hat[i] + params_.lambda);
  }
  if (!trained_) {
    alpha_hat_ = std::move(alpha_hat);
    x_hat_ = x_hat;
    trained_ = true;
    return;
  }
  const double eta = params_.eta;
  for (std::size_t i = 0; i < alpha_hat.size(); ++i) {
    alpha_hat_[i] = (1.0 - eta) * alpha_hat_[i] + eta * alpha_hat[i];
    x_hat_[i] = (1.0 - eta) * x_hat_[i] + eta * x_hat[i];
  }
}

RealGrid KcfModel::respond(const RealGrid& patch, double* max_imag) const {
  if (!trained_) throw UsageError("KcfModel: respond() before train()");
  check_shape(patch);
  const ComplexGrid k_hat = kernel_spectrum(x_hat_, fft2(patch));
  ComplexGrid prod(width_, height_);
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = alpha_hat_[i] * k_hat[i];
  return ifft2_real(prod, max_imag);
}

Shift response_peak(const RealGrid& response) {
  Shift best{0, 0, -std::numeric_limits<double>::infinity()};
  for (int y = 0; y < response.height(); ++y) {
    for (int x = 0; x < response.width(); ++x) {
      if (response.at(x, y) > best.peak) best = {x, y, response.at(x, y)};
    }
  }
  if (best.dx >= (response.width() + 1) / 2) best.dx -= response.width();
  if (best.dy >= (response.height() + 1) / 2) best.dy -= response.height();
  return best;
}

KcfTracker::KcfTracker(const KcfParams& params)
    : params_(validated(params)),
      window_(cosine_window(params.resolution, params.resolution)),
      model_(params.resolution, params.resolution, params) {}

RealGrid KcfTracker::features(const Frame& frame, const BoundingBox& bbox) const {
  const SearchingArea sa = crop_searching_area(frame, bbox, 1.0 + params_.padding);
  const std::vector<double> luma = to_luma(sa.patch);
  RealGrid f = resample(luma, sa.patch.width(), sa.patch.height(),
                        params_.resolution, params_.resolution);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = (f[i] / 255.0 - 0.5) * window_[i];
  }
  return f;
}

KcfTracker::Displacement KcfTracker::detect(const Frame& frame) const {
  if (!box_) throw UsageError("kcf: detect() before init()");
  const RealGrid response = model_.respond(features(frame, *box_));
  const Shift peak = response_peak(response);
  const int n = params_.resolution;
  auto cyc = [&](int x, int y) {
    return response.at(((x % n) + n) % n, ((y % n) + n) % n);
  };
  const double sub_x = parabolic_offset(cyc(peak.dx - 1, peak.dy), peak.peak,
                                        cyc(peak.dx + 1, peak.dy));
  const double sub_y = parabolic_offset(cyc(peak.dx, peak.dy - 1), peak.peak,
                                        cyc(peak.dx, peak.dy + 1));
  const Placement pl =
      place_crop(*box_, 1.0 + params_.padding, frame.width(), frame.height());
  return {(peak.dx + sub_x) * pl.crop_w / n, (peak.dy + sub_y) * pl.crop_h / n};
}

void KcfTracker::do_init(const Frame& frame, const BoundingBox& bbox) {
  box_ = bbox;
  model_.train(features(frame, bbox));
}

BoundingBox KcfTracker::do_update(const Frame& frame) {
  const Displacement d = detect(frame);
  box_ = box_->translated(d.dx, d.dy);
  model_.train(features(frame, *box_));
  return *box_;
}

}  // namespace segtrack
