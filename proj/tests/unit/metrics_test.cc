#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "segtrack/core/geometry.h"
#include "segtrack/error.h"
#include "segtrack/metrics/mask_metrics.h"
#include "test_util.h"

namespace segtrack {
namespace {

using testing::random_mask;

double brute_iou(const BinaryMask& a, const BinaryMask& b) {
  int inter = 0, uni = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      inter += a.at(x, y) && b.at(x, y);
      uni += a.at(x, y) || b.at(x, y);
    }
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

TEST(Iou, MatchesBruteForce) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const BinaryMask a = random_mask(rng, 16, 16, d(rng));
    const BinaryMask b = random_mask(rng, 16, 16, d(rng));
    ASSERT_EQ(iou(a, b), brute_iou(a, b));
    ASSERT_EQ(iou(a, b), iou(b, a));
  }
}

TEST(Iou, Examples) {
  const BinaryMask a = rect_to_mask(BoundingBox(3, 3, 4, 4), 10, 10);
  const BinaryMask b = rect_to_mask(BoundingBox(8, 8, 2, 2), 10, 10);
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, b), 0.0);
  EXPECT_EQ(iou(BinaryMask(4, 4), BinaryMask(4, 4)), 1.0);
  EXPECT_THROW(iou(BinaryMask(4, 4), BinaryMask(4, 5)), ContractError);
}

// Distance check over every pixel pair instead of a dilation.
double brute_boundary_f(const BinaryMask& p, const BinaryMask& g, double theta) {
  const BinaryMask bp = boundary_pixels(p);
  const BinaryMask bg = boundary_pixels(g);
  auto matched = [&](const BinaryMask& from, const BinaryMask& to) {
    int hit = 0, n = 0;
    for (int y = 0; y < from.height(); ++y) {
      for (int x = 0; x < from.width(); ++x) {
        if (!from.at(x, y)) continue;
        ++n;
        bool ok = false;
        for (int v = 0; v < to.height() && !ok; ++v) {
          for (int u = 0; u < to.width() && !ok; ++u) {
            ok = to.at(u, v) && (u - x) * (u - x) + (v - y) * (v - y) <= theta * theta;
          }
        }
        hit += ok;
      }
    }
    return std::pair{hit, n};
  };
  const auto [hp, np] = matched(bp, bg);
  const auto [hr, nr] = matched(bg, bp);
  if (np == 0 && nr == 0) return 1.0;
  if (np == 0 || nr == 0) return 0.0;
  const double prec = static_cast<double>(hp) / np;
  const double rec = static_cast<double>(hr) / nr;
  return prec + rec == 0 ? 0.0 : 2 * prec * rec / (prec + rec);
}

TEST(BoundaryF, ShiftedSquare) {
  const BinaryMask g = rect_to_mask(BoundingBox(7.5, 7.5, 8, 8), 16, 16);
  const BinaryMask p = rect_to_mask(BoundingBox(8.5, 7.5, 8, 8), 16, 16);
  EXPECT_EQ(boundary_f(p, g, 1.0), 1.0);
  EXPECT_LT(boundary_f(p, g, 0.0), 1.0);
  EXPECT_NEAR(boundary_f(p, g, 0.0), brute_boundary_f(p, g, 0.0), 1e-12);
}

TEST(BoundaryF, IdenticalAndFar) {
  std::mt19937_64 rng(72);
  const BinaryMask m = random_mask(rng, 16, 16, 0.4);
  EXPECT_EQ(boundary_f(m, m, 0.0), 1.0);
  const BinaryMask a = rect_to_mask(BoundingBox(2, 2, 3, 3), 40, 40);
  const BinaryMask b = rect_to_mask(BoundingBox(35, 35, 3, 3), 40, 40);
  EXPECT_EQ(boundary_f(a, b, 5.0), 0.0);
  EXPECT_EQ(boundary_f(BinaryMask(5, 5), BinaryMask(5, 5), 1.0), 1.0);
  EXPECT_EQ(boundary_f(a, BinaryMask(40, 40), 1.0), 0.0);
  EXPECT_THROW(boundary_f(a, b, -1.0), ParameterError);
  EXPECT_THROW(boundary_f(a, BinaryMask(4, 4), 1.0), ContractError);
}

TEST(Property, BoundaryFMatchesOracleSymmetricMonotone) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 100; ++i) {
    const BinaryMask a = random_mask(rng, 16, 16, 0.3);
    const BinaryMask b = random_mask(rng, 16, 16, 0.3);
    double prev = -1;
    for (double theta : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
      const double f = boundary_f(a, b, theta);
      EXPECT_NEAR(f, brute_boundary_f(a, b, theta), 1e-12);
      EXPECT_NEAR(f, boundary_f(b, a, theta), 1e-12);
      EXPECT_GE(f, prev - 1e-12);
      prev = f;
    }
  }
}

TEST(BoundaryF, DefaultTheta) {
  EXPECT_NEAR(default_boundary_theta(854, 480), 0.008 * std::hypot(854, 480), 1e-12);
}

TEST(MeasureStats, Examples) {
  const MeasureStats s = measure_stats({1, 1, 0, 0});
  EXPECT_EQ(s.mean, 0.5);
  EXPECT_EQ(s.recall, 0.5);
  EXPECT_EQ(s.decay, 1.0);
  EXPECT_FALSE(s.short_sequence);

  // Six scores: bins of 2,2,1,1.
  EXPECT_NEAR(measure_stats({1, 0.8, 0.6, 0.4, 0.2, 0}).decay, 0.9, 1e-12);

  const MeasureStats t = measure_stats({0.5, 0.5, 0.5000001});
  EXPECT_NEAR(t.recall, 1.0 / 3, 1e-12);
  EXPECT_TRUE(t.short_sequence);
  EXPECT_EQ(t.decay, 0.0);
  EXPECT_THROW(measure_stats({}), ContractError);
}

TEST(MeasureStats, LinearRamp) {
  std::vector<double> ramp;
  for (int i = 0; i < 40; ++i) ramp.push_back(1.0 - i / 39.0);
  // Bins of 10: means 1 - 4.5/39 and 1 - 34.5/39.
  const double oracle = 30.0 / 39.0;
  EXPECT_NEAR(measure_stats(ramp).decay, oracle, 1e-12);
  EXPECT_NEAR(measure_stats(ramp).decay, 0.75, 0.02);
}

TEST(Property, ConstantScoresHaveNoDecay) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 80;
    EXPECT_EQ(measure_stats(std::vector<double>(n, u(rng))).decay, 0.0);
  }
}

TEST(Property, MeanAndRecallIgnoreOrderDecayDoesNot) {
  std::mt19937_64 rng(75);
  std::uniform_real_distribution<double> u(0, 1);
  bool decay_changed = false;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(12);
    for (auto& x : v) x = u(rng);
    auto w = v;
    std::shuffle(w.begin(), w.end(), rng);
    const MeasureStats a = measure_stats(v);
    const MeasureStats b = measure_stats(w);
    EXPECT_NEAR(a.mean, b.mean, 1e-12);
    EXPECT_EQ(a.recall, b.recall);
    decay_changed |= std::abs(a.decay - b.decay) > 1e-9;
  }
  EXPECT_TRUE(decay_changed);
}

TEST(Davis, SkipsEmptyTruth) {
  const BinaryMask g = rect_to_mask(BoundingBox(5, 5, 4, 4), 12, 12);
  const BinaryMask e(12, 12);
  const DavisScores s = davis_scores({g, g, e}, {g, e, g}, 1.0);
  EXPECT_EQ(s.frames, 2U);
  EXPECT_EQ(s.j.mean, 0.5);
  EXPECT_THROW(davis_scores({g}, {e}, 1.0), ContractError);
  EXPECT_FALSE(score_frame(g, e, 1.0).valid);
}

}  // namespace
}  // namespace segtrack
