#include "segtrack/bench/runner.h"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <thread>

#include "segtrack/bench/report.h"
#include "segtrack/core/image_io.h"
#include "segtrack/error.h"
#include "segtrack/pipeline/output.h"

namespace segtrack {
namespace fs = std::filesystem;

namespace {

struct Job {
  std::size_t tracker = 0;
  std::size_t segmenter = 0;
  double k = 0.0;
  std::size_t sequence = 0;
};

struct JobResult {
  bool done = false;
  std::vector<DavisScores> objects;
  std::vector<VotRun> runs;
  std::vector<std::size_t> lengths;
};

std::string k_label(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

std::string combo_label(const std::string& t, const std::string& s, double k) {
  return t + "__" + s + "__k" + k_label(k);
}

double theta_for(const Sequence& seq, std::optional<double> theta) {
  return theta ? *theta : default_boundary_theta(seq.width(), seq.height());
}

void add_vot_rows(std::vector<ScoreRow>& rows, const VotScores& v, const std::string& t,
                  const std::string& s, double k, const std::string& seq) {
  rows.push_back({t, s, k, seq, "A", v.accuracy});
  rows.push_back({t, s, k, seq, "R", v.robustness});
  rows.push_back({t, s, k, seq, "EAO", v.eao});
}

// Re-raises `e` as the same error family with the job context prefixed.
[[noreturn]] void rethrow_with_context(std::exception_ptr e, const std::string& context) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    throw ConfigError(context + ": " + x.what());
  } catch (const DataError& x) {
    throw DataError(context + ": " + x.what());
  } catch (const TransportError& x) {
    throw TransportError(context + ": " + x.what());
  } catch (const Error& x) {
    throw Error(context + ": " + x.what());
  }
}

}  // namespace

std::vector<ScoreRow> davis_rows(const std::vector<DavisScores>& objects,
                                 const std::string& tracker, const std::string& segmenter,
                                 double k, const std::string& sequence) {
  std::vector<ScoreRow> rows;
  if (objects.empty()) return rows;
  const double n = static_cast<double>(objects.size());
  double v[6] = {0, 0, 0, 0, 0, 0};
  for (const DavisScores& d : objects) {
    v[0] += d.j.mean;
    v[1] += d.j.recall;
    v[2] += d.j.decay;
    v[3] += d.f.mean;
    v[4] += d.f.recall;
    v[5] += d.f.decay;
  }
  const char* names[6] = {"J_M", "J_R", "J_D", "F_M", "F_R", "F_D"};
  for (int i = 0; i < 6; ++i) rows.push_back({tracker, segmenter, k, sequence, names[i], v[i] / n});
  return rows;
}

std::vector<ObjectScore> davis_sequence_scores(
    const Sequence& seq, const ComponentSpec& tracker_spec, const ComponentSpec& seg_spec,
    double k, double tau, std::optional<double> theta, std::vector<RunRecord>* records,
    std::vector<std::map<ObjectId, BinaryMask>>* fused_out) {
  PipelineConfig cfg;
  cfg.k = k;
  cfg.tau = tau;
  std::vector<RunRecord> runs;
  const auto ids = seq.object_ids();
  for (ObjectId id : ids) {
    const auto& gt = seq.gt_masks(id);
    auto tracker = make_tracker(tracker_spec, &gt);
    auto segmenter = make_segmenter(seg_spec, &gt);
    runs.push_back(run_sequence(*tracker, *segmenter, seq, id, cfg));
  }
  // Frame t of the sequence is frames[t - 1] of every record.
  std::vector<std::map<ObjectId, BinaryMask>> fused(seq.size() - 1);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    if (runs.size() == 1) {
      fused[t - 1].emplace(ids[0], runs[0].frames[t - 1].mask);
      continue;
    }
    std::map<ObjectId, ProbMap> maps;
    for (std::size_t o = 0; o < ids.size(); ++o) {
      maps.emplace(ids[o], runs[o].frames[t - 1].confidence);
    }
    fused[t - 1] = fuse_multiobject(maps, tau);
  }
  std::vector<ObjectScore> out;
  const double th = theta_for(seq, theta);
  for (ObjectId id : ids) {
    const auto& gt = seq.gt_masks(id);
    std::vector<BinaryMask> preds;
    std::vector<BinaryMask> gts(gt.begin() + 1, gt.end());
    preds.reserve(gts.size());
    for (const auto& f : fused) preds.push_back(f.at(id));
    const bool any_gt =
        std::any_of(gts.begin(), gts.end(), [](const BinaryMask& m) { return m.any(); });
    if (!any_gt) continue;
    out.push_back({id, davis_scores(preds, gts, th)});
  }
  if (records) *records = std::move(runs);
  if (fused_out) *fused_out = std::move(fused);
  return out;
}

std::vector<VotRun> vot_sequence_runs(const Sequence& seq, ObjectId id,
                                      const ComponentSpec& tracker_spec,
                                      const ComponentSpec& seg_spec, double k, double tau,
                                      const VotParams& params,
                                      std::vector<std::size_t>* lengths) {
  PipelineConfig cfg;
  cfg.k = k;
  cfg.tau = tau;
  std::vector<VotRun> runs;
  for (const Anchor& a : vot_anchors(seq.size(), params.interval)) {
    if (!seq.gt_masks(id)[a.frame].any()) continue;
    const std::size_t len = subsequence_length(a, seq.size());
    if (len == 0) continue;
    const bool backward = a.direction == Direction::Backward;
    const Sequence sub = seq.slice(a.frame, len + 1, backward);
    const auto& gt = sub.gt_masks(id);
    auto tracker = make_tracker(tracker_spec, &gt);
    auto segmenter = make_segmenter(seg_spec, &gt);
    SegmentationTracker st(*tracker, *segmenter, cfg);
    st.init(sub.frame(0), gt[0]);
    VotRun run{a.frame, a.direction, {}, std::nullopt};
    for (std::size_t t = 1; t <= len; ++t) {
      const FrameRecord rec = st.step(sub.frame(t), t);
      const double o = iou(rec.mask, gt[t]);
      run.overlaps.push_back(o);
      if (o < params.fail_tau) {
        run.failed_at = t - 1;
        break;
      }
    }
    runs.push_back(std::move(run));
    if (lengths) lengths->push_back(len);
  }
  return runs;
}

BenchmarkResult evaluate_benchmark(const BenchConfig& cfg,
                                   const std::vector<Sequence>& sequences,
                                   std::exception_ptr* failure) {
  std::vector<Job> jobs;
  for (std::size_t ti = 0; ti < cfg.trackers.size(); ++ti) {
    for (std::size_t si = 0; si < cfg.segmenters.size(); ++si) {
      for (double k : cfg.ks_for(cfg.segmenters[si])) {
        for (std::size_t q = 0; q < sequences.size(); ++q) jobs.push_back({ti, si, k, q});
      }
    }
  }

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::size_t err_job = jobs.size();
  std::exception_ptr err;

  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const ComponentSpec& ts = cfg.trackers[job.tracker];
    const ComponentSpec& ss = cfg.segmenters[job.segmenter];
    const Sequence& seq = sequences[job.sequence];
    JobResult& r = results[j];
    if (cfg.protocol == Protocol::DavisOpe) {
      std::vector<RunRecord> records;
      std::vector<std::map<ObjectId, BinaryMask>> fused;
      const bool keep = cfg.write_masks || cfg.write_manifests;
      for (auto& o : davis_sequence_scores(seq, ts, ss, job.k, cfg.tau, cfg.theta,
                                           keep ? &records : nullptr,
                                           keep ? &fused : nullptr)) {
        r.objects.push_back(o.scores);
      }
      const fs::path combo = combo_label(ts.name, ss.name, job.k);
      if (cfg.write_masks) write_mask_pngs(cfg.output_dir / "masks" / combo / seq.name(), fused, 1);
      if (cfg.write_manifests) {
        for (const RunRecord& rec : records) {
          write_run_manifest(cfg.output_dir / "runs" / combo /
                                 (seq.name() + "_obj" + std::to_string(rec.object_id) + ".json"),
                             rec);
        }
      }
    } else {
      for (ObjectId id : seq.object_ids()) {
        auto runs = vot_sequence_runs(seq, id, ts, ss, job.k, cfg.tau, cfg.vot, &r.lengths);
        for (auto& run : runs) r.runs.push_back(std::move(run));
      }
    }
    r.done = true;
  };

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        run_job(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (j < err_job) {
          err_job = j;
          err = std::current_exception();
        }
        stop.store(true);
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchmarkResult out;
  out.config_hash = config_hash(cfg);
  if (err) {
    const Job& job = jobs[err_job];
    out.partial = true;
    out.error = combo_label(cfg.trackers[job.tracker].name, cfg.segmenters[job.segmenter].name,
                            job.k) +
                " on '" + sequences[job.sequence].name() + "'";
    if (failure) *failure = err;
  }

  // Ordered merge: jobs of one combination are contiguous.
  for (std::size_t begin = 0; begin < jobs.size();) {
    std::size_t end = begin;
    while (end < jobs.size() && jobs[end].tracker == jobs[begin].tracker &&
           jobs[end].segmenter == jobs[begin].segmenter && jobs[end].k == jobs[begin].k) {
      ++end;
    }
    const std::string& t = cfg.trackers[jobs[begin].tracker].name;
    const std::string& s = cfg.segmenters[jobs[begin].segmenter].name;
    const double k = jobs[begin].k;
    std::vector<DavisScores> all_objects;
    std::vector<VotRun> all_runs;
    std::vector<std::size_t> all_lengths;
    std::size_t all_frames = 0;
    bool complete = true;
    for (std::size_t j = begin; j < end; ++j) {
      const JobResult& r = results[j];
      if (!r.done) {
        complete = false;
        continue;
      }
      const Sequence& seq = sequences[jobs[j].sequence];
      const double frames = static_cast<double>(seq.size());
      all_frames += seq.size();
      if (cfg.protocol == Protocol::DavisOpe) {
        auto rows = davis_rows(r.objects, t, s, k, seq.name());
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
        all_objects.insert(all_objects.end(), r.objects.begin(), r.objects.end());
      } else if (!r.runs.empty()) {
        add_vot_rows(out.rows, vot_evaluate(r.runs, r.lengths, cfg.vot), t, s, k, seq.name());
        all_runs.insert(all_runs.end(), r.runs.begin(), r.runs.end());
        all_lengths.insert(all_lengths.end(), r.lengths.begin(), r.lengths.end());
      }
      out.rows.push_back({t, s, k, seq.name(), "frames", frames});
    }
    // A combination with unfinished jobs gets no ALL rows.
    if (complete) {
      if (cfg.protocol == Protocol::DavisOpe) {
        auto rows = davis_rows(all_objects, t, s, k, kAllSequences);
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
      } else if (!all_runs.empty()) {
        add_vot_rows(out.rows, vot_evaluate(all_runs, all_lengths, cfg.vot), t, s, k,
                     kAllSequences);
      }
      out.rows.push_back({t, s, k, kAllSequences, "frames", static_cast<double>(all_frames)});
    }
    begin = end;
  }
  return out;
}

BenchmarkResult run_benchmark(const BenchConfig& config, bool sweep) {
  BenchConfig cfg = config;
  if (sweep && !cfg.ks_explicit) cfg.ks = kDefaultSweepKs;
  const std::vector<Sequence> sequences = load_dataset(cfg.dataset);
  std::exception_ptr failure;
  BenchmarkResult result = evaluate_benchmark(cfg, sequences, &failure);
  write_reports(cfg, result, sweep);
  if (failure) rethrow_with_context(failure, result.error);
  return result;
}

std::vector<SpeedRow> run_speed(const BenchConfig& cfg, const std::vector<Sequence>& sequences) {
  std::vector<SpeedRow> rows;
  PipelineConfig pc;
  pc.tau = cfg.tau;
  pc.record_timings = true;
  // The rect baseline stands in for "no segmenter" when timing trackers.
  const ComponentSpec rect{"rect", {}};
  for (const ComponentSpec& ts : cfg.trackers) {
    std::vector<double> track_only;
    for (const Sequence& seq : sequences) {
      for (ObjectId id : seq.object_ids()) {
        const auto& gt = seq.gt_masks(id);
        auto tracker = make_tracker(ts, &gt);
        auto seg = make_segmenter(rect, &gt);
        pc.k = cfg.ks.front();
        const RunRecord rec = run_sequence(*tracker, *seg, seq, id, pc);
        for (const auto& f : rec.frames) track_only.push_back(f.t_track);
      }
    }
    rows.push_back({ts.name, "none", speed_from_durations(track_only)});
    for (const ComponentSpec& ss : cfg.segmenters) {
      std::vector<double> both;
      pc.k = cfg.ks_for(ss).front();
      for (const Sequence& seq : sequences) {
        for (ObjectId id : seq.object_ids()) {
          const auto& gt = seq.gt_masks(id);
          auto tracker = make_tracker(ts, &gt);
          auto seg = make_segmenter(ss, &gt);
          const RunRecord rec = run_sequence(*tracker, *seg, seq, id, pc);
          for (const auto& f : rec.frames) both.push_back(f.t_track + f.t_segment);
        }
      }
      rows.push_back({ts.name, ss.name, speed_from_durations(both)});
    }
  }
  for (const ComponentSpec& ss : cfg.segmenters) {
    std::vector<double> seg_only;
    for (const Sequence& seq : sequences) {
      for (ObjectId id : seq.object_ids()) {
        const auto& gt = seq.gt_masks(id);
        auto seg = make_segmenter(ss, &gt);
        const SpeedStats s = measure_segmenter_speed(*seg, seq, id, cfg.ks_for(ss).front());
        seg_only.insert(seg_only.end(), s.frames, s.mean_s);
      }
    }
    rows.push_back({"none", ss.name, speed_from_durations(seg_only)});
  }
  return rows;
}

std::vector<ScoreRow> evaluate_mask_dirs(const std::vector<Sequence>& sequences,
                                         const fs::path& pred_dir,
                                         std::optional<double> theta,
                                         const std::string& label) {
  std::vector<ScoreRow> rows;
  std::vector<DavisScores> all;
  for (const Sequence& seq : sequences) {
    const fs::path dir = pred_dir / seq.name();
    std::vector<fs::path> files;
    for (const auto& p : list_images(dir)) {
      if (p.extension() == ".png") files.push_back(p);
    }
    std::size_t offset = 0;
    if (files.size() == seq.size()) {
      offset = 1;  // the first file is the given frame
    } else if (files.size() != seq.size() - 1) {
      throw DataError(dir.string() + ": " + std::to_string(files.size()) +
                      " masks for a sequence of " + std::to_string(seq.size()) + " frames");
    }
    std::vector<IndexImage> preds;
    for (std::size_t i = offset; i < files.size(); ++i) {
      IndexImage img = read_index_png(files[i]);
      if (img.width != seq.width() || img.height != seq.height()) {
        throw DataError(files[i].string() + ": mask size differs from the sequence");
      }
      preds.push_back(std::move(img));
    }
    std::vector<DavisScores> objects;
    for (ObjectId id : seq.object_ids()) {
      const auto& gt = seq.gt_masks(id);
      std::vector<BinaryMask> gts(gt.begin() + 1, gt.end());
      if (std::none_of(gts.begin(), gts.end(), [](const BinaryMask& m) { return m.any(); })) {
        continue;
      }
      std::vector<BinaryMask> masks;
      for (const IndexImage& img : preds) {
        std::vector<std::uint8_t> bits(img.indices.size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = img.indices[i] == id ? 1 : 0;
        masks.emplace_back(img.width, img.height, std::move(bits));
      }
      objects.push_back(davis_scores(masks, gts, theta_for(seq, theta)));
    }
    auto seq_rows = davis_rows(objects, "eval", label, 0.0, seq.name());
    rows.insert(rows.end(), seq_rows.begin(), seq_rows.end());
    rows.push_back({"eval", label, 0.0, seq.name(), "frames", static_cast<double>(seq.size())});
    all.insert(all.end(), objects.begin(), objects.end());
  }
  auto all_rows = davis_rows(all, "eval", label, 0.0, kAllSequences);
  rows.insert(rows.end(), all_rows.begin(), all_rows.end());
  return rows;
}

}  // namespace segtrack
