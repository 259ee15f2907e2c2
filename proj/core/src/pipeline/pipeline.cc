#include "segtrack/pipeline/pipeline.h"

#include <chrono>
#include <cmath>
#include <numeric>

namespace segtrack {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(k >= 1.0) || !std::isfinite(k)) {
    throw ParameterError("pipeline: k must be >= 1, got " + std::to_string(k));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ParameterError("pipeline: tau must lie in [0,1], got " + std::to_string(tau));
  }
}

SegmentationTracker::SegmentationTracker(Tracker& tracker, Segmenter& segmenter,
                                         PipelineConfig cfg)
    : tracker_(tracker), segmenter_(segmenter), cfg_(cfg) {
  cfg_.validate();
}

void SegmentationTracker::init(const Frame& frame, const BinaryMask& gt_mask) {
  if (!gt_mask.any()) throw EmptyTargetError("pipeline: empty ground truth on the init frame");
  tracker_.init(frame, enclosing_bbox(gt_mask));
  segmenter_.init(build_template(segmenter_.template_mode(), frame, gt_mask,
                                 segmenter_.template_context()));
}

FrameRecord SegmentationTracker::step(const Frame& frame, std::size_t index) {
  FrameRecord rec;
  rec.index = index;
  auto start = Clock::now();
  rec.bbox = tracker_.update(frame);
  if (cfg_.record_timings) rec.t_track = seconds_since(start);

  const SearchingArea sa = crop_searching_area(frame, rec.bbox, cfg_.k);
  start = Clock::now();
  const ProbMap local = segmenter_.segment(sa);
  if (cfg_.record_timings) rec.t_segment = seconds_since(start);

  rec.confidence = paste_map(local, sa.placement, frame.width(), frame.height());
  rec.mask = binarize(rec.confidence, cfg_.tau);
  return rec;
}

RunRecord run_sequence(Tracker& tracker, Segmenter& segmenter, const Sequence& seq,
                       ObjectId object_id, const PipelineConfig& cfg) {
  if (seq.size() < 2) {
    throw ContractError("run_sequence: '" + seq.name() + "' has fewer than 2 frames");
  }
  RunRecord record;
  record.sequence = seq.name();
  record.object_id = object_id;
  record.tracker = std::string(tracker.name());
  record.segmenter = std::string(segmenter.name());
  record.config = cfg;

  SegmentationTracker st(tracker, segmenter, cfg);
  st.init(seq.frame(0), seq.gt_masks(object_id).at(0));
  record.frames.reserve(seq.size() - 1);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    try {
      record.frames.push_back(st.step(seq.frame(t), t));
    } catch (const TransportError& e) {
      throw RunAbortedError(seq.name() + " frame " + std::to_string(t) + ": " + e.what(),
                            std::move(record));
    }
  }
  return record;
}

std::map<ObjectId, BinaryMask> fuse_multiobject(const std::map<ObjectId, ProbMap>& maps,
                                                double bg_tau) {
  std::map<ObjectId, BinaryMask> out;
  if (maps.empty()) return out;
  const int w = maps.begin()->second.width();
  const int h = maps.begin()->second.height();
  for (const auto& [id, m] : maps) {
    if (m.width() != w || m.height() != h) {
      throw ContractError("fuse_multiobject: confidence maps differ in size");
    }
    out.emplace(id, BinaryMask(w, h));
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const ObjectId* best = nullptr;
      float best_v = 0.0F;
      // std::map iterates ids in ascending order and only a strictly larger
      // value replaces the incumbent.
      for (const auto& [id, m] : maps) {
        const float v = m.at(x, y);
        if (best == nullptr || v > best_v) {
          best = &id;
          best_v = v;
        }
      }
      if (best_v > bg_tau) out.at(*best).set(x, y, true);
    }
  }
  return out;
}

SpeedStats speed_from_durations(const std::vector<double>& seconds) {
  if (seconds.empty()) throw UsageError("speed: no timed frames");
  SpeedStats s;
  s.frames = seconds.size();
  s.mean_s = std::accumulate(seconds.begin(), seconds.end(), 0.0) /
             static_cast<double>(seconds.size());
  s.fps = s.mean_s > 0.0 ? 1.0 / s.mean_s : 0.0;
  return s;
}

SpeedStats measure_speed(const RunRecord& record) {
  if (!record.config.record_timings) throw UsageError("speed: run was not timed");
  std::vector<double> d;
  d.reserve(record.frames.size());
  for (const auto& f : record.frames) d.push_back(f.t_track + f.t_segment);
  return speed_from_durations(d);
}

SpeedStats measure_tracker_speed(const RunRecord& record) {
  if (!record.config.record_timings) throw UsageError("speed: run was not timed");
  std::vector<double> d;
  d.reserve(record.frames.size());
  for (const auto& f : record.frames) d.push_back(f.t_track);
  return speed_from_durations(d);
}

SpeedStats measure_segmenter_speed(Segmenter& segmenter, const Sequence& seq,
                                   ObjectId object_id, double k) {
  const auto& gt = seq.gt_masks(object_id);
  if (!gt.at(0).any()) throw EmptyTargetError("speed: empty ground truth on frame 0");
  segmenter.init(build_template(segmenter.template_mode(), seq.frame(0), gt[0],
                                segmenter.template_context()));
  std::vector<double> d;
  BoundingBox box = enclosing_bbox(gt[0]);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    // An absent object keeps its last box so every frame is segmented once.
    if (const auto b = seq.gt_box(object_id, t)) box = *b;
    const SearchingArea sa = crop_searching_area(seq.frame(t), box, k);
    const auto start = Clock::now();
    segmenter.segment(sa);
    d.push_back(seconds_since(start));
  }
  return speed_from_durations(d);
}

}  // namespace segtrack
