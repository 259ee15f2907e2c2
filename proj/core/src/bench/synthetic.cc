#include "segtrack/bench/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "segtrack/error.h"

namespace segtrack {
namespace {

std::uint8_t clamp_byte(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

// Uniform integer in [-amp, amp] from raw engine output.
int jitter(std::mt19937_64& rng, int amp) {
  if (amp <= 0) return 0;
  return static_cast<int>(rng() % static_cast<std::uint64_t>(2 * amp + 1)) - amp;
}

double reflect(double p, double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0.0) return lo;
  double t = std::fmod(p - lo, 2.0 * span);
  if (t < 0.0) t += 2.0 * span;
  return lo + (t <= span ? t : 2.0 * span - t);
}

}  // namespace

std::string_view to_string(Shape shape) {
  return shape == Shape::Rect ? "rect" : "ellipse";
}

Shape parse_shape(std::string_view name) {
  if (name == "rect") return Shape::Rect;
  if (name == "ellipse") return Shape::Ellipse;
  throw ConfigError("unknown shape '" + std::string(name) + "' (expected rect or ellipse)");
}

BinaryMask shape_mask(Shape shape, double cx, double cy, double w, double h, int width,
                      int height) {
  if (shape == Shape::Rect) return rect_to_mask(BoundingBox(cx, cy, w, h), width, height);
  // Inscribed in the same pixel block a rect of this box would cover, so the
  // enclosing box of the ellipse is that block.
  BinaryMask m(width, height);
  const PixelSpan sx = pixel_span(cx, w);
  const PixelSpan sy = pixel_span(cy, h);
  const double rx = sx.count / 2.0;
  const double ry = sy.count / 2.0;
  const double ex = sx.start + rx - 0.5;
  const double ey = sy.start + ry - 0.5;
  for (int y = std::max(0, sy.start); y < std::min(height, sy.start + sy.count); ++y) {
    for (int x = std::max(0, sx.start); x < std::min(width, sx.start + sx.count); ++x) {
      const double u = (x - ex) / rx;
      const double v = (y - ey) / ry;
      if (u * u + v * v <= 1.0) m.set(x, y, true);
    }
  }
  return m;
}

Sequence gen_synthetic(const SyntheticSpec& s) {
  if (s.width < 1 || s.height < 1 || s.frames < 1) {
    throw ParameterError("synthetic: width, height and frames must be >= 1");
  }
  if (!(s.obj_w > 0.0) || !(s.obj_h > 0.0)) {
    throw ParameterError("synthetic: object size must be positive");
  }
  if (s.texture < 0 || s.noise < 0) throw ParameterError("synthetic: negative amplitude");
  std::mt19937_64 rng(s.seed);

  const auto n = static_cast<std::size_t>(s.width) * s.height;
  std::vector<int> bg_tex(n);
  for (int& v : bg_tex) v = jitter(rng, s.texture);
  // Target texture lives in object coordinates and moves with it.
  const int tw = static_cast<int>(std::ceil(s.obj_w)) + 2;
  const int th = static_cast<int>(std::ceil(s.obj_h)) + 2;
  std::vector<int> fg_tex(static_cast<std::size_t>(tw) * th);
  for (int& v : fg_tex) v = jitter(rng, s.texture);

  const double cx0 = s.cx0.value_or(40.0);
  const double cy0 = s.cy0.value_or(s.height / 2.0);
  std::vector<Frame> frames;
  std::vector<BinaryMask> masks;
  frames.reserve(s.frames);
  masks.reserve(s.frames);
  for (int t = 0; t < s.frames; ++t) {
    double cx = cx0 + s.vx * t;
    double cy = cy0 + s.vy * t;
    if (s.bounce) {
      cx = reflect(cx, s.obj_w / 2.0, s.width - 1 - s.obj_w / 2.0);
      cy = reflect(cy, s.obj_h / 2.0, s.height - 1 - s.obj_h / 2.0);
    }
    BinaryMask mask = shape_mask(s.shape, cx, cy, s.obj_w, s.obj_h, s.width, s.height);
    if (!mask.any() && !s.allow_exit) {
      throw DataError("synthetic '" + s.name + "': target leaves the frame at t=" +
                      std::to_string(t));
    }
    const double left = cx - s.obj_w / 2.0;
    const double top = cy - s.obj_h / 2.0;
    std::vector<std::uint8_t> px(n * 3);
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * s.width + x;
        Rgb base = s.bg;
        int tex = bg_tex[i];
        if (mask.at(x, y)) {
          base = s.fg;
          const int ox = std::clamp(static_cast<int>(std::floor(x - left)), 0, tw - 1);
          const int oy = std::clamp(static_cast<int>(std::floor(y - top)), 0, th - 1);
          tex = fg_tex[static_cast<std::size_t>(oy) * tw + ox];
        }
        for (int c = 0; c < 3; ++c) {
          px[i * 3 + c] = clamp_byte(base[c] + tex + jitter(rng, s.noise));
        }
      }
    }
    frames.emplace_back(s.width, s.height, std::move(px));
    masks.push_back(std::move(mask));
  }
  std::map<ObjectId, std::vector<BinaryMask>> gt;
  gt.emplace(1, std::move(masks));
  return Sequence(s.name, std::move(frames), std::move(gt));
}

std::vector<Sequence> gen_synthetic_set(const SyntheticSpec& spec, int count) {
  if (count < 1) throw ParameterError("synthetic: count must be >= 1");
  std::vector<Sequence> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    SyntheticSpec s = spec;
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%03d", i);
    s.name = spec.name + suffix;
    s.seed = spec.seed + static_cast<std::uint64_t>(i);
    if (!spec.cy0) {
      std::mt19937_64 rng(s.seed ^ 0x5eedULL);
      const int margin = static_cast<int>(std::ceil(spec.obj_h / 2.0)) + 1;
      const int room = std::max(1, spec.height - 2 * margin);
      s.cy0 = margin + static_cast<double>(rng() % static_cast<std::uint64_t>(room));
    }
    out.push_back(gen_synthetic(s));
  }
  return out;
}

}  // namespace segtrack
