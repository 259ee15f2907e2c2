// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "segtrack/bench/config.h"
#include "segtrack/bench/dataset.h"
#include "segtrack/bench/decompose.h"
#include "segtrack/bench/report.h"
#include "segtrack/bench/rle.h"
#include "segtrack/bench/runner.h"
#include "segtrack/bench/synthetic.h"
#include "segtrack/error.h"
#include "segtrack/metrics/mask_metrics.h"
#include "segtrack/metrics/vot.h"
#include "segtrack/pipeline/pipeline.h"
#include "segtrack/trackers/kcf.h"
#include "test_util.h"

using namespace segtrack;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_s) c.expect(false, "took " + std::to_string(secs) + " s");
  std::printf("%s %-28s %.4f s (limit %g s)%s%s\n", c.ok ? "PASS" : "FAIL", name, secs,
              limit_s, c.ok ? "" : "  ", c.why.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void decomposition(Check& c) {
  const auto a = decompose_error(0.519, 0.440, 0.809, 0.638);
  const auto b = decompose_error(0.519, 0.464, 0.744, 0.691);
  c.expect(std::abs(a.e_tracker - 0.079) <= 1e-9, "e_T example 1");
  c.expect(std::abs(a.e_segmenter - 0.092) <= 1e-9, "e_S example 1");
  c.expect(std::abs(b.e_tracker - 0.055) <= 1e-9, "e_T example 2");
  c.expect(std::abs(b.e_segmenter + 0.002) <= 1e-9, "e_S example 2");
}

void ceiling(Check& c) {
  const BenchConfig davis = parse_config(
      "", {"synthetic.count=3", "synthetic.frames=60", "tracker.name=oracle",
           "segmenter.name=oracle"});
  const auto seqs = load_dataset(davis.dataset);
  c.expect(seqs.size() == 3 && seqs[0].size() >= 60, "dataset shape");
  const auto d = evaluate_benchmark(davis, seqs, nullptr);
  c.expect(lookup_score(d.rows, "oracle", "oracle", 1.5, "J_M") == 1.0, "J_M != 1");
  c.expect(lookup_score(d.rows, "oracle", "oracle", 1.5, "F_M") == 1.0, "F_M != 1");
  BenchConfig vot = davis;
  vot.protocol = Protocol::VotAnchors;
  const auto v = evaluate_benchmark(vot, seqs, nullptr);
  c.expect(lookup_score(v.rows, "oracle", "oracle", 1.5, "A") == 1.0, "A != 1");
  c.expect(lookup_score(v.rows, "oracle", "oracle", 1.5, "R") == 1.0, "R != 1");
}

void rect_identity(Check& c) {
  const Sequence seq = gen_synthetic(SyntheticSpec{});
  for (const char* name : {"ncc", "kcf"}) {
    auto t = make_tracker({name, {}}, nullptr);
    RectFillSegmenter s;
    const RunRecord r = run_sequence(*t, s, seq, 1, PipelineConfig{});
    for (const auto& f : r.frames) {
      c.expect(f.mask == rect_to_mask(f.bbox, seq.width(), seq.height()),
               std::string(name) + " mask differs from its box");
    }
  }
  SyntheticSpec e;
  e.shape = Shape::Ellipse;
  e.obj_w = 30;
  e.obj_h = 22;
  const Sequence es = gen_synthetic(e);
  OracleTracker t(es.gt_masks(1));
  RectFillSegmenter s;
  const RunRecord r = run_sequence(t, s, es, 1, PipelineConfig{});
  std::vector<BinaryMask> preds(r.frames.size(), BinaryMask(1, 1));
  std::vector<BinaryMask> gts(preds);
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    preds[i] = r.frames[i].mask;
    gts[i] = es.gt_masks(1)[r.frames[i].index];
  }
  const double jm = davis_scores(preds, gts, 1.0).j.mean;
  c.expect(std::abs(jm - M_PI / 4) <= 0.03, "ellipse J_M " + std::to_string(jm));
}

void metric_oracles(Check& c) {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const BinaryMask a = testing::random_mask(rng, 16, 16);
    const BinaryMask b = testing::random_mask(rng, 16, 16);
    int in = 0, un = 0;
    for (std::size_t p = 0; p < a.bits().size(); ++p) {
      in += a.bits()[p] && b.bits()[p];
      un += a.bits()[p] || b.bits()[p];
    }
    c.expect(iou(a, b) == (un == 0 ? 1.0 : static_cast<double>(in) / un), "iou oracle");
  }
  const BinaryMask m = testing::random_mask(rng, 16, 16);
  c.expect(boundary_f(m, m, 0.0) == 1.0, "identical boundary_f");
  const BinaryMask far1 = rect_to_mask(BoundingBox(3, 3, 4, 4), 64, 64);
  const BinaryMask far2 = rect_to_mask(BoundingBox(58, 58, 4, 4), 64, 64);
  c.expect(boundary_f(far1, far2, 5.0) == 0.0, "far boundary_f");
  for (int i = 0; i < 100; ++i) {
    const BinaryMask a = testing::random_mask(rng, 16, 16, 0.3);
    const BinaryMask b = testing::random_mask(rng, 16, 16, 0.3);
    double prev = -1;
    for (double th = 0; th <= 6; th += 0.5) {
      const double f = boundary_f(a, b, th);
      c.expect(f >= prev, "boundary_f not monotone in theta");
      prev = f;
    }
  }
  std::uniform_real_distribution<double> u(0, 1);
  for (int n = 1; n <= 64; ++n) {
    c.expect(measure_stats(std::vector<double>(n, u(rng))).decay == 0.0, "constant decay");
  }
  c.expect(measure_stats({0.5, 0.5, 0.5, 0.5}).recall == 0.0, "recall at 0.5");
  c.expect(measure_stats({0.5, std::nextafter(0.5, 1.0), 0.5, 0.5}).recall == 0.25,
           "recall just above 0.5");
}

void vot_fixtures(Check& c) {
  c.expect(vot_anchors(120, 50) == std::vector<Anchor>{{0, Direction::Forward},
                                                       {50, Direction::Forward},
                                                       {100, Direction::Backward}},
           "anchors");
  VotParams p;
  p.burn_in = 1;
  p.eao_lo = 2;
  p.eao_hi = 4;
  const VotRun r1 = make_vot_run(0, Direction::Forward, {0.9, 0.8, 0.05}, 0.1);
  const VotRun r2 = make_vot_run(10, Direction::Backward, {0.6, 0.7, 0.8}, 0.1);
  const VotScores s = vot_evaluate({r1, r2}, {5, 3}, p);
  const double eao = ((0.85 + 0.65) / 2 + (1.7 / 3 + 0.7) / 2 + 1.7 / 4) / 3;
  c.expect(std::abs(s.accuracy - 2.3 / 3) <= 1e-9, "A");
  c.expect(std::abs(s.robustness - 5.0 / 8) <= 1e-9, "R");
  c.expect(std::abs(s.eao - eao) <= 1e-9, "EAO");
  VotParams q;
  q.eao_lo = 1;
  q.eao_hi = 1;
  std::vector<double> o(q.burn_in, 0.11);
  o.resize(30, 1.0);
  c.expect(vot_evaluate({make_vot_run(0, Direction::Forward, o, 0.1)}, {30}, q).accuracy == 1.0,
           "burn-in sentinels");
}

void kcf_numerics(Check& c) {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int n : {8, 16}) {
    RealGrid x(n, n), z(n, n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      z[i] = u(rng);
    }
    const RealGrid k = kernel_correlation(x, z, 0.5);
    for (int sy = 0; sy < n; ++sy) {
      for (int sx = 0; sx < n; ++sx) {
        double d2 = 0;
        for (int y = 0; y < n; ++y) {
          for (int xx = 0; xx < n; ++xx) {
            const double d = x.at(xx, y) - z.at((xx + sx) % n, (y + sy) % n);
            d2 += d * d;
          }
        }
        c.expect(std::abs(k.at(sx, sy) - std::exp(-d2 / (0.25 * n * n))) <= 1e-6,
                 "kernel_correlation vs brute force");
      }
    }
  }
  RealGrid x(16, 16);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng);
  KcfModel m(16, 16, KcfParams{});
  m.train(x);
  RealGrid z(16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int xx = 0; xx < 16; ++xx) z.at(xx, y) = x.at((xx + 16 - 5) % 16, (y + 3) % 16);
  }
  const Shift s = response_peak(m.respond(z, nullptr));
  c.expect(s.dx == 5 && s.dy == -3, "cyclic shift not recovered");

  const Sequence seq = gen_synthetic(SyntheticSpec{});
  KcfTracker t;
  t.init(seq.frame(0), *seq.gt_box(1, 0));
  double err = 0;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const BoundingBox b = t.update(seq.frame(i));
    const BoundingBox g = *seq.gt_box(1, i);
    err += std::hypot(b.cx() - g.cx(), b.cy() - g.cy());
  }
  err /= static_cast<double>(seq.size() - 1);
  c.expect(err <= 3.0, "mean center error " + std::to_string(err));
}

void sweep(Check& c) {
  testing::TempDir dir("acc_sweep");
  const BenchConfig cfg =
      parse_config("", {"synthetic.count=2", "synthetic.frames=20", "tracker.name=kcf,ncc",
                        "segmenter.name=rect,colorbayes", "run.seed=11",
                        "output.dir=" + dir.path().string()});
  run_benchmark(cfg, true);
  const std::string first = slurp(dir.path() / "sweep.csv");
  const std::string report = slurp(dir.path() / "report.json");
  std::istringstream in(first);
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::vector<std::string>> ks;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    ks[line.substr(0, c2)].push_back(line.substr(c2 + 1, c3 - c2 - 1));
  }
  c.expect(ks.size() == 4, "combinations");
  for (const auto& [combo, v] : ks) {
    c.expect(v == std::vector<std::string>{"1", "1.25", "1.5", "1.75", "2"},
             combo + " k axis");
  }
  run_benchmark(cfg, true);
  c.expect(slurp(dir.path() / "sweep.csv") == first, "sweep.csv differs across runs");
  c.expect(slurp(dir.path() / "report.json") == report, "report.json differs across runs");
}

void rle_io(Check& c) {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> d(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 48);
    const int h = 1 + static_cast<int>(rng() % 48);
    const BinaryMask m = testing::random_mask(rng, w, h, d(rng));
    c.expect(rle_decode(rle_encode(m), w, h) == m, "rle roundtrip");
  }
  for (const char* bad : {"", "m", "q0,0,1,1,1", "m0,0,5,5,1", "m0,0,2,2,9", "m0,0,2,2,x",
                          "m-1,0,1,1,1", "m0,0,0,0,1", "m0,0,2,2,1,,"}) {
    bool typed = false;
    try {
      rle_decode(bad, 4, 4);
    } catch (const RleError&) {
      typed = true;
    }
    c.expect(typed, std::string("untyped rle failure for '") + bad + "'");
  }
  std::string ok = rle_encode(testing::random_mask(rng, 9, 7));
  for (int i = 0; i < 5000; ++i) {
    std::string s = ok;
    s[rng() % s.size()] = "m,0123456789-x"[rng() % 14];
    if (rng() % 4 == 0) s.resize(rng() % s.size());
    try {
      rle_decode(s, 9, 7);
    } catch (const RleError&) {
    }
  }
  testing::TempDir dir("acc_io");
  SyntheticSpec spec;
  spec.frames = 5;
  const Sequence seq = gen_synthetic(spec);
  write_vot_dataset(dir.path() / "vot", {seq});
  write_davis_dataset(dir.path() / "davis", "val", {seq});
  DatasetLayout vl{DatasetKind::Vot, dir.path() / "vot", "val", {}, 0};
  DatasetLayout dl{DatasetKind::Davis, dir.path() / "davis", "val", {}, 0};
  c.expect(load_dataset(vl)[0].gt_masks(1) == seq.gt_masks(1), "vot roundtrip");
  c.expect(load_dataset(dl)[0].gt_masks(1) == seq.gt_masks(1), "davis roundtrip");
  std::ofstream(dir.path() / "vot" / seq.name() / "groundtruth.txt") << "m0,0\n";
  bool typed = false;
  try {
    load_dataset(vl);
  } catch (const DataError&) {
    typed = true;
  }
  c.expect(typed, "corrupt groundtruth not reported as DataError");
}

}  // namespace

int main() {
  criterion("error-decomposition", 0.001, decomposition);
  criterion("ceiling-run", 10, ceiling);
  criterion("rect-baseline-identity", 60, rect_identity);
  criterion("metric-oracles", 30, metric_oracles);
  criterion("vot-protocol-fixtures", 10, vot_fixtures);
  criterion("kcf-numerics", 60, kcf_numerics);
  criterion("k-sweep-harness", 120, sweep);
  criterion("rle-dataset-io", 60, rle_io);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
