#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "segtrack/bench/config.h"
#include "segtrack/bench/dataset.h"
#include "segtrack/bench/decompose.h"
#include "segtrack/bench/report.h"
#include "segtrack/bench/rle.h"
#include "segtrack/bench/runner.h"
#include "segtrack/bench/synthetic.h"
#include "segtrack/core/image_io.h"
#include "segtrack/error.h"
#include "test_util.h"

namespace segtrack {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- RLE

TEST(Rle, Examples) {
  BinaryMask m(4, 3);
  EXPECT_EQ(rle_encode(m), "m0,0,0,0,");
  m.set(1, 1, true);
  m.set(2, 1, true);
  EXPECT_EQ(rle_encode(m), "m1,1,2,1,0 2");
  EXPECT_EQ(rle_decode("m1,1,2,1,0 2", 4, 3), m);
  EXPECT_EQ(rle_decode("m1,1,2,1,0 2\r\n", 4, 3), m);
  EXPECT_EQ(rle_decode("m0,0,0,0,", 4, 3), BinaryMask(4, 3));
}

TEST(Property, RleRoundTrip) {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> d(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 30);
    const BinaryMask m = testing::random_mask(rng, w, h, d(rng) * d(rng));
    ASSERT_EQ(rle_decode(rle_encode(m), w, h), m);
  }
}

TEST(Rle, MalformedInputsAreTyped) {
  const char* bad[] = {"",           "x1,1,2,1,0,2", "m1,1,2,1,0,9", "m1,1,2",
                       "m1,1,2,1,a", "m3,1,2,1,0,2", "m1,1,2,1,-1", "m0,0,0,0,3",
                       "m1,1,2,1,,", "m99999999999999999999,0,1,1,1",
                       "m1,1,18446744073709551615,1,1"};
  for (const char* line : bad) {
    EXPECT_THROW(rle_decode(line, 4, 3), RleError) << line;
  }
  std::mt19937_64 rng(92);
  const std::string ok = rle_encode(testing::random_mask(rng, 6, 5));
  for (int i = 0; i < 2000; ++i) {
    std::string s = ok;
    s[rng() % s.size()] = "m,0123456789x- "[rng() % 15];
    try {
      rle_decode(s, 6, 5);
    } catch (const RleError&) {
    }
  }
}

// ---- datasets

Sequence two_object_seq() {
  std::vector<Frame> frames;
  std::vector<BinaryMask> a, b;
  std::mt19937_64 rng(93);
  for (int t = 0; t < 4; ++t) {
    frames.push_back(testing::random_frame(rng, 24, 16));
    a.push_back(rect_to_mask(BoundingBox(5 + t, 5, 4, 4), 24, 16));
    b.push_back(rect_to_mask(BoundingBox(17, 10 - t, 3, 5), 24, 16));
  }
  return Sequence("two", frames, {{1, a}, {2, b}});
}

TEST(Dataset, DavisRoundTrip) {
  TempDir dir("davis");
  const Sequence s = two_object_seq();
  write_davis_dataset(dir.path(), "val", {s});
  DatasetLayout l;
  l.kind = DatasetKind::Davis;
  l.root = dir.path();
  const auto loaded = load_dataset(l);
  ASSERT_EQ(loaded.size(), 1U);
  EXPECT_EQ(loaded[0].object_ids(), (std::vector<ObjectId>{1, 2}));
  EXPECT_EQ(loaded[0].gt_masks(2), s.gt_masks(2));
  EXPECT_EQ(loaded[0].frames(), s.frames());
  const IndexImage ann = read_index_png(dir.path() / "Annotations/two/00000.png");
  EXPECT_EQ(annotation_color(1), (Rgb{128, 0, 0}));
  EXPECT_EQ(ann.indices[5 * 24 + 5], 1);
}

TEST(Dataset, DavisErrors) {
  TempDir dir("davis_bad");
  write_davis_dataset(dir.path(), "val", {two_object_seq()});
  DatasetLayout l;
  l.kind = DatasetKind::Davis;
  l.root = dir.path();
  IndexImage extra = read_index_png(dir.path() / "Annotations/two/00002.png");
  extra.indices[0] = 5;
  write_index_png(dir.path() / "Annotations/two/00002.png", extra);
  EXPECT_THROW(load_dataset(l), DataError);
  fs::remove(dir.path() / "Annotations/two/00002.png");
  EXPECT_THROW(load_dataset(l), DataError);
  l.split = "test";
  EXPECT_THROW(load_dataset(l), DataError);
}

TEST(Dataset, VotRoundTrip) {
  TempDir dir("vot");
  SyntheticSpec spec;
  spec.frames = 6;
  const Sequence s = gen_synthetic(spec);
  write_vot_dataset(dir.path(), {s});
  DatasetLayout l;
  l.kind = DatasetKind::Vot;
  l.root = dir.path();
  const auto loaded = load_dataset(l);
  ASSERT_EQ(loaded.size(), 1U);
  EXPECT_EQ(loaded[0].gt_masks(1), s.gt_masks(1));
  EXPECT_EQ(loaded[0].frame(3), s.frame(3));
  EXPECT_TRUE(fs::exists(dir.path() / s.name() / "color" / "00000001.png"));

  std::ofstream(dir.path() / s.name() / "groundtruth.txt", std::ios::app) << "m0,0,0,0,\n";
  EXPECT_THROW(load_dataset(l), DataError);
}

TEST(Synthetic, DeterministicAndStatic) {
  SyntheticSpec spec;
  spec.noise = 10;
  const Sequence a = gen_synthetic(spec);
  const Sequence b = gen_synthetic(spec);
  EXPECT_EQ(a.frames(), b.frames());
  EXPECT_EQ(a.gt_masks(1), b.gt_masks(1));
  spec.seed = 8;
  EXPECT_NE(gen_synthetic(spec).frames(), a.frames());

  spec.vx = 0;
  spec.vy = 0;
  const Sequence z = gen_synthetic(spec);
  for (std::size_t t = 1; t < z.size(); ++t) EXPECT_EQ(z.gt_masks(1)[t], z.gt_masks(1)[0]);
  EXPECT_EQ(enclosing_bbox(a.gt_masks(1)[5]).cx() - enclosing_bbox(a.gt_masks(1)[0]).cx(), 10.0);

  SyntheticSpec leave;
  leave.vx = 10;
  EXPECT_THROW(gen_synthetic(leave), DataError);
  const auto set = gen_synthetic_set(SyntheticSpec{}, 3);
  EXPECT_EQ(set[2].name(), "synth_002");
}

// ---- decomposition

TEST(Decompose, WorkedExamples) {
  const auto a = decompose_error(0.519, 0.440, 0.809, 0.638);
  EXPECT_NEAR(a.e_tracker, 0.079, 1e-9);
  EXPECT_NEAR(a.e_segmenter, 0.092, 1e-9);
  const auto b = decompose_error(0.519, 0.464, 0.744, 0.691);
  EXPECT_NEAR(b.e_tracker, 0.055, 1e-9);
  EXPECT_NEAR(b.e_segmenter, -0.002, 1e-9);
}

TEST(Property, DecompositionSumsToTotalGap) {
  std::mt19937_64 rng(94);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const auto e = decompose_error(a, b, c, d);
    EXPECT_NEAR(e.e_tracker + e.e_segmenter, c - d, 1e-12);
    EXPECT_NEAR(e.e_tracker, a - b, 1e-12);
  }
}

// ---- config

TEST(Config, ParseAndOverride) {
  const std::string ini =
      "[tracker]\nname = kcf, ncc\n[segmenter]\nname = rect, colorbayes\n"
      "[segmenter.colorbayes]\nbins = 8\nk = 1, 2\n[pipeline]\nk = 1.25\n"
      "[protocol]\nname = vot-anchors\nburn_in = 3\n";
  const BenchConfig c = parse_config(ini, {"run.workers=2", "segmenter.colorbayes.bins=4"});
  ASSERT_EQ(c.trackers.size(), 2U);
  EXPECT_EQ(c.trackers[1].name, "ncc");
  EXPECT_EQ(c.segmenters[1].params.get_int("bins", 0), 4);
  EXPECT_EQ(c.ks, std::vector<double>{1.25});
  EXPECT_EQ(c.ks_for(c.segmenters[0]), std::vector<double>{1.25});
  EXPECT_EQ(c.ks_for(c.segmenters[1]), (std::vector<double>{1, 2}));
  EXPECT_EQ(c.protocol, Protocol::VotAnchors);
  EXPECT_EQ(c.vot.burn_in, 3U);
  EXPECT_EQ(c.workers, 2);

  const BenchConfig d = parse_config("");
  EXPECT_EQ(d.trackers[0].name, "kcf");
  EXPECT_EQ(d.segmenters[0].name, "rect");
  EXPECT_FALSE(d.ks_explicit);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[bogus]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[pipeline]\nkk = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("", {"pipeline.k"}), ConfigError);
  EXPECT_THROW(parse_config("", {"nosection=1"}), ConfigError);
  EXPECT_THROW(parse_config("[pipeline]\nk = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[protocol]\nname = ope\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\nworkers = two\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/x.ini"), ConfigError);
}

TEST(Config, HashTracksContent) {
  const BenchConfig a = parse_config("[pipeline]\ntau = 0.5\n");
  const BenchConfig b = parse_config("", {"pipeline.tau=0.5"});
  const BenchConfig c = parse_config("[pipeline]\ntau = 0.6\n");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 64U);
}

// ---- runner and reports

BenchConfig small_config(const fs::path& out, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> o = {"synthetic.count=2",      "synthetic.frames=16",
                                "tracker.name=kcf,oracle", "segmenter.name=rect,colorbayes",
                                "output.dir=" + out.string()};
  o.insert(o.end(), extra.begin(), extra.end());
  return parse_config("", o);
}

TEST(Runner, ReportsAreByteDeterministic) {
  TempDir dir("det");
  const BenchConfig cfg = small_config(dir.path());
  run_benchmark(cfg);
  const std::string s1 = slurp(dir.path() / "scores.csv");
  const std::string r1 = slurp(dir.path() / "report.json");
  run_benchmark(cfg);
  EXPECT_EQ(slurp(dir.path() / "scores.csv"), s1);
  EXPECT_EQ(slurp(dir.path() / "report.json"), r1);
  const auto j = nlohmann::json::parse(r1);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("provenance").at("config_hash"), config_hash(cfg));
  EXPECT_EQ(slurp(dir.path() / "leaderboard.csv").find("oracle,oracle"), std::string::npos);
}

TEST(Runner, SweepHasFiveRowsPerCombination) {
  TempDir dir("sweep");
  const BenchConfig cfg = small_config(dir.path());
  run_benchmark(cfg, true);
  const std::string first = slurp(dir.path() / "sweep.csv");
  std::istringstream in(first);
  std::string line;
  std::map<std::string, int> per_combo;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("tracker,segmenter,k,", 0), 0U);
  while (std::getline(in, line)) {
    const auto second_comma = line.find(',', line.find(',') + 1);
    ++per_combo[line.substr(0, second_comma)];
  }
  EXPECT_EQ(per_combo.size(), 4U);
  for (const auto& [combo, n] : per_combo) EXPECT_EQ(n, 5) << combo;
  run_benchmark(cfg, true);
  EXPECT_EQ(slurp(dir.path() / "sweep.csv"), first);
}

TEST(Runner, WorkerCountDoesNotChangeRows) {
  const BenchConfig one = small_config("unused");
  const BenchConfig two = small_config("unused", {"run.workers=3"});
  const auto seqs = load_dataset(one.dataset);
  const auto a = evaluate_benchmark(one, seqs, nullptr);
  const auto b = evaluate_benchmark(two, seqs, nullptr);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_FALSE(a.partial);
}

TEST(Runner, OracleCeilingAndRectColumn) {
  const BenchConfig cfg = small_config("unused");
  const auto seqs = load_dataset(cfg.dataset);
  const auto res = evaluate_benchmark(cfg, seqs, nullptr);
  EXPECT_EQ(lookup_score(res.rows, "oracle", "rect", 1.5, "J_M"), 1.0);
  EXPECT_EQ(lookup_score(res.rows, "oracle", "rect", 1.5, "F_M"), 1.0);
  const double kcf_rect = lookup_score(res.rows, "kcf", "rect", 1.5, "J_M");
  EXPECT_GT(kcf_rect, 0.5);
  EXPECT_LE(kcf_rect, 1.0);
  const auto d = decompose_from_rows(res.rows, "kcf", "colorbayes", 1.5, "J_M");
  EXPECT_NEAR(d.e_tracker, 1.0 - kcf_rect, 1e-12);
}

TEST(Runner, VotProtocolCeiling) {
  const BenchConfig cfg =
      parse_config("", {"synthetic.count=1", "synthetic.frames=30", "tracker.name=oracle",
                        "segmenter.name=oracle", "protocol.name=vot-anchors",
                        "protocol.interval=10", "protocol.eao_lo=2", "protocol.eao_hi=5"});
  const auto res = evaluate_benchmark(cfg, load_dataset(cfg.dataset), nullptr);
  EXPECT_EQ(lookup_score(res.rows, "oracle", "oracle", 1.5, "A"), 1.0);
  EXPECT_EQ(lookup_score(res.rows, "oracle", "oracle", 1.5, "R"), 1.0);
  EXPECT_EQ(lookup_score(res.rows, "oracle", "oracle", 1.5, "EAO"), 1.0);
}

TEST(Runner, ExternalFailureIsPartialAndTyped) {
  const BenchConfig cfg = small_config(
      "unused", {"segmenter.name=external",
                 std::string("segmenter.external.endpoint=exec:") + FAKE_SEGSERVER + " crash",
                 "segmenter.external.mode=bbox-channel", "tracker.name=kcf"});
  std::exception_ptr failure;
  const auto res = evaluate_benchmark(cfg, load_dataset(cfg.dataset), &failure);
  EXPECT_TRUE(res.partial);
  EXPECT_TRUE(failure);
  EXPECT_THROW(run_benchmark(cfg), TransportError);
}

TEST(Report, CsvRoundTripAndFormat) {
  TempDir dir("csv");
  std::vector<ScoreRow> rows = {{"kcf", "rect", 1.5, "ALL", "J_M", 0.25},
                                {"kcf", "rect", 1.5, "ALL", "frames", 30}};
  EXPECT_EQ(scores_csv(rows).substr(0, scores_csv(rows).find('\n')),
            "tracker,segmenter,k,sequence,measure,value");
  BenchConfig cfg;
  cfg.output_dir = dir.path();
  BenchmarkResult res;
  res.rows = rows;
  write_reports(cfg, res, false);
  EXPECT_EQ(read_report_rows(dir.path() / "report.json"), rows);
  EXPECT_EQ(format_value(0.25), "0.2500000000");
  EXPECT_THROW(lookup_score(rows, "kcf", "rect", 2.0, "J_M"), Error);
}

TEST(EvalDirs, ScoresWrittenMasks) {
  TempDir dir("eval");
  const BenchConfig cfg = small_config(dir.path(), {"output.masks=true", "tracker.name=oracle",
                                                    "segmenter.name=oracle"});
  run_benchmark(cfg);
  const auto seqs = load_dataset(cfg.dataset);
  const auto rows = evaluate_mask_dirs(seqs, dir.path() / "masks" / "oracle__oracle__k1.5",
                                       std::nullopt, "pred");
  EXPECT_EQ(lookup_score(rows, "eval", "pred", 0.0, "J_M"), 1.0);
}

// ---- CLI

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEGTRACK_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  TempDir dir("cli");
  const std::string out = " -o " + dir.path().string();
  EXPECT_EQ(run_cli("decompose --values 0.519,0.440,0.809,0.638"), 0);
  EXPECT_EQ(run_cli("run -s synthetic.count=1 -s synthetic.frames=8" + out), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "scores.csv"));
  EXPECT_EQ(run_cli("run -s pipeline.bogus=1" + out), 1);
  EXPECT_EQ(run_cli("run -s pipeline.k=0.5" + out), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli("run -s dataset.kind=davis -s dataset.root=/nonexistent" + out), 2);
  EXPECT_EQ(run_cli("run -s synthetic.count=1 -s synthetic.frames=8 -s segmenter.name=external "
                    "-s segmenter.external.mode=bbox-channel "
                    "-s 'segmenter.external.endpoint=exec:" +
                    std::string(FAKE_SEGSERVER) + " crash'" + out),
            3);
}

}  // namespace
}  // namespace segtrack
