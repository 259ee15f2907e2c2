#include "segtrack/metrics/mask_metrics.h"

#include <cmath>
#include <numeric>
#include <string>

#include "segtrack/error.h"

namespace segtrack {
namespace {

void check_same_size(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ContractError(std::string(what) + ": masks differ in size");
  }
}

// Marks every pixel within Euclidean distance theta of a boundary pixel.
std::vector<std::uint8_t> dilate(const BinaryMask& boundary, double theta) {
  const int w = boundary.width();
  const int h = boundary.height();
  const int r = static_cast<int>(std::floor(theta));
  const double r2 = theta * theta;
  std::vector<std::pair<int, int>> disk;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r2) disk.emplace_back(dx, dy);
    }
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!boundary.at(x, y)) continue;
      for (const auto& [dx, dy] : disk) {
        const int xx = x + dx;
        const int yy = y + dy;
        if (xx >= 0 && xx < w && yy >= 0 && yy < h) {
          out[static_cast<std::size_t>(yy) * w + xx] = 1;
        }
      }
    }
  }
  return out;
}

// Fraction of `from` boundary pixels covered by `near`.
double coverage(const BinaryMask& from, const std::vector<std::uint8_t>& near) {
  std::size_t hit = 0;
  std::size_t total = 0;
  const auto bits = from.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    ++total;
    hit += near[i];
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace

double iou(const BinaryMask& a, const BinaryMask& b) {
  check_same_size(a, b, "iou");
  std::size_t inter = 0;
  std::size_t uni = 0;
  const auto pa = a.bits();
  const auto pb = b.bits();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    inter += pa[i] & pb[i];
    uni += pa[i] | pb[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask boundary_pixels(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(w, h);
  auto bg = [&](int x, int y) {
    return x < 0 || y < 0 || x >= w || y >= h || mask.at(x, y) == 0;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) &&
          (bg(x - 1, y) || bg(x + 1, y) || bg(x, y - 1) || bg(x, y + 1))) {
        out.set(x, y, true);
      }
    }
  }
  return out;
}

double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double theta) {
  check_same_size(pred, gt, "boundary_f");
  if (!(theta >= 0.0)) throw ParameterError("boundary_f: theta must be >= 0");
  const BinaryMask bp = boundary_pixels(pred);
  const BinaryMask bg = boundary_pixels(gt);
  const bool ep = !bp.any();
  const bool eg = !bg.any();
  if (ep && eg) return 1.0;
  if (ep || eg) return 0.0;
  const double precision = coverage(bp, dilate(bg, theta));
  const double recall = coverage(bg, dilate(bp, theta));
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double default_boundary_theta(int width, int height) {
  return 0.008 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

FrameScore score_frame(const BinaryMask& pred, const BinaryMask& gt, double theta) {
  FrameScore s;
  if (!gt.any()) {
    check_same_size(pred, gt, "score_frame");
    return s;
  }
  s.valid = true;
  s.j = iou(pred, gt);
  s.f = boundary_f(pred, gt, theta);
  return s;
}

MeasureStats measure_stats(const std::vector<double>& scores) {
  if (scores.empty()) throw ContractError("measure_stats: no scores");
  MeasureStats m;
  const double n = static_cast<double>(scores.size());
  m.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  std::size_t above = 0;
  for (double s : scores) above += s > 0.5 ? 1 : 0;
  m.recall = static_cast<double>(above) / n;
  if (scores.size() < 4) {
    m.short_sequence = true;
    return m;
  }
  const std::size_t base = scores.size() / 4;
  const std::size_t extra = scores.size() % 4;
  const std::size_t first = base + (extra > 0 ? 1 : 0);
  const std::size_t last = base;  // the last bin never takes a remainder frame
  // Offsets from the first score keep a constant sequence at exactly 0.
  const double ref = scores.front();
  auto offset_mean = [ref](auto begin, auto end, std::size_t n) {
    double sum = 0.0;
    for (auto it = begin; it != end; ++it) sum += *it - ref;
    return sum / static_cast<double>(n);
  };
  m.decay = offset_mean(scores.begin(), scores.begin() + first, first) -
            offset_mean(scores.end() - last, scores.end(), last);
  return m;
}

DavisScores davis_scores(const std::vector<BinaryMask>& preds,
                         const std::vector<BinaryMask>& gts, double theta) {
  if (preds.size() != gts.size()) {
    throw ContractError("davis_scores: prediction and ground-truth counts differ");
  }
  std::vector<double> j;
  std::vector<double> f;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const FrameScore s = score_frame(preds[i], gts[i], theta);
    if (!s.valid) continue;
    j.push_back(s.j);
    f.push_back(s.f);
  }
  DavisScores d;
  d.frames = j.size();
  if (j.empty()) throw ContractError("davis_scores: no frame with ground truth");
  d.j = measure_stats(j);
  d.f = measure_stats(f);
  return d;
}

}  // namespace segtrack
