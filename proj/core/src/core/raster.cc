#include "segtrack/core/raster.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

void check_dims(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw ContractError(std::string(what) + ": dimensions must be >= 1, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
}

std::size_t area(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

// Source coordinate for destination pixel `i` when mapping `dst` samples onto
// `src` samples with pixel centers aligned.
struct Tap {
  int lo;
  int hi;
  double frac;
};

Tap bilinear_tap(int i, int src, int dst) {
  const double scale = static_cast<double>(src) / dst;
  double s = (i + 0.5) * scale - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(src - 1));
  const int lo = static_cast<int>(std::floor(s));
  const int hi = std::min(lo + 1, src - 1);
  return {lo, hi, s - lo};
}

}  // namespace

Frame::Frame(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height, "Frame");
  pixels_.resize(area(width, height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill[0];
    pixels_[i + 1] = fill[1];
    pixels_[i + 2] = fill[2];
  }
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height, "Frame");
  if (pixels_.size() != area(width, height) * 3) {
    throw ContractError("Frame: pixel buffer has " +
                        std::to_string(pixels_.size()) + " bytes, expected " +
                        std::to_string(area(width, height) * 3));
  }
}

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height), bits_(area(width, height), 0) {
  check_dims(width, height, "BinaryMask");
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height, "BinaryMask");
  if (bits_.size() != area(width, height)) {
    throw ContractError("BinaryMask: buffer size mismatch");
  }
  if (std::any_of(bits_.begin(), bits_.end(),
                  [](std::uint8_t b) { return b > 1; })) {
    throw ContractError("BinaryMask: elements must be 0 or 1");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BinaryMask::any() const {
  return std::find(bits_.begin(), bits_.end(), 1) != bits_.end();
}

ProbMap::ProbMap(int width, int height, float fill)
    : width_(width), height_(height) {
  check_dims(width, height, "ProbMap");
  if (!(fill >= 0.0F && fill <= 1.0F)) {
    throw ContractError("ProbMap: fill value outside [0,1]");
  }
  values_.assign(area(width, height), fill);
}

ProbMap::ProbMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, "ProbMap");
  if (values_.size() != area(width, height)) {
    throw ContractError("ProbMap: buffer size mismatch");
  }
  if (std::any_of(values_.begin(), values_.end(),
                  [](float v) { return !(v >= 0.0F && v <= 1.0F); })) {
    throw ContractError("ProbMap: values must lie in [0,1]");
  }
}

void ProbMap::set(int x, int y, float v) {
  values_[index(x, y)] = std::isnan(v) ? 0.0F : std::clamp(v, 0.0F, 1.0F);
}

ProbMap to_prob_map(const BinaryMask& mask) {
  std::vector<float> values(mask.bits().begin(), mask.bits().end());
  return ProbMap(mask.width(), mask.height(), std::move(values));
}

std::vector<double> to_luma(const Frame& frame) {
  std::vector<double> out(area(frame.width(), frame.height()));
  const auto px = frame.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  }
  return out;
}

Frame resize_bilinear(const Frame& src, int width, int height) {
  check_dims(width, height, "resize_bilinear");
  if (src.width() == width && src.height() == height) return src;
  std::vector<std::uint8_t> out(area(width, height) * 3);
  for (int y = 0; y < height; ++y) {
    const Tap ty = bilinear_tap(y, src.height(), height);
    for (int x = 0; x < width; ++x) {
      const Tap tx = bilinear_tap(x, src.width(), width);
      const Rgb a = src.at(tx.lo, ty.lo);
      const Rgb b = src.at(tx.hi, ty.lo);
      const Rgb c = src.at(tx.lo, ty.hi);
      const Rgb d = src.at(tx.hi, ty.hi);
      for (int ch = 0; ch < 3; ++ch) {
        const double top = a[ch] + (b[ch] - a[ch]) * tx.frac;
        const double bottom = c[ch] + (d[ch] - c[ch]) * tx.frac;
        const double v = top + (bottom - top) * ty.frac;
        out[(static_cast<std::size_t>(y) * width + x) * 3 + ch] =
            static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return Frame(width, height, std::move(out));
}

ProbMap resize_bilinear(const ProbMap& src, int width, int height) {
  check_dims(width, height, "resize_bilinear");
  if (src.width() == width && src.height() == height) return src;
  std::vector<float> out(area(width, height));
  for (int y = 0; y < height; ++y) {
    const Tap ty = bilinear_tap(y, src.height(), height);
    for (int x = 0; x < width; ++x) {
      const Tap tx = bilinear_tap(x, src.width(), width);
      const double top =
          src.at(tx.lo, ty.lo) + (src.at(tx.hi, ty.lo) - src.at(tx.lo, ty.lo)) * tx.frac;
      const double bottom =
          src.at(tx.lo, ty.hi) + (src.at(tx.hi, ty.hi) - src.at(tx.lo, ty.hi)) * tx.frac;
      out[static_cast<std::size_t>(y) * width + x] =
          static_cast<float>(std::clamp(top + (bottom - top) * ty.frac, 0.0, 1.0));
    }
  }
  return ProbMap(width, height, std::move(out));
}

}  // namespace segtrack
