#pragma once

#include <map>
#include <string>
#include <vector>

#include "segtrack/core/sequence.h"
#include "segtrack/error.h"
#include "segtrack/segmenters/segmenter.h"
#include "segtrack/trackers/tracker.h"

namespace segtrack {

struct PipelineConfig {
  double k = 1.5;    // searching-area factor
  double tau = 0.5;  // binarization threshold
  bool record_timings = false;

  // Throws ParameterError unless k >= 1 and 0 <= tau <= 1.
  void validate() const;
};

struct FrameRecord {
  std::size_t index = 0;  // frame index within the sequence, >= 1
  BoundingBox bbox{0, 0, 1, 1};
  ProbMap confidence;     // full frame
  BinaryMask mask;        // binarize(confidence, tau)
  double t_track = 0.0;   // seconds
  double t_segment = 0.0;
};

struct RunRecord {
  std::string sequence;
  ObjectId object_id = 0;
  std::string tracker;
  std::string segmenter;
  PipelineConfig config;
  std::vector<FrameRecord> frames;
};

// Thrown when a segmenter's transport fails mid-run. `partial` holds every
// frame finished before the failure.
class RunAbortedError : public TransportError {
 public:
  RunAbortedError(const std::string& what, RunRecord partial)
      : TransportError(what), partial_(std::move(partial)) {}
  const RunRecord& partial() const { return partial_; }

 private:
  RunRecord partial_;
};

// One tracker + segmenter pair driven frame by frame:
//   b_t = tracker.update(F_t); s_t = crop(F_t, b_t, k); map = segment(s_t);
//   confidence = paste(map); mask = binarize(confidence, tau).
// Neither component is owned.
class SegmentationTracker {
 public:
  SegmentationTracker(Tracker& tracker, Segmenter& segmenter, PipelineConfig cfg);

  // Initializes both components from the first frame and its ground-truth
  // mask. Throws EmptyTargetError on an empty mask.
  void init(const Frame& frame, const BinaryMask& gt_mask);
  FrameRecord step(const Frame& frame, std::size_t index);

  const PipelineConfig& config() const { return cfg_; }

 private:
  Tracker& tracker_;
  Segmenter& segmenter_;
  PipelineConfig cfg_;
};

// Runs the loop over the whole sequence for one object. Ground truth is read
// only on frame 0 (components with GT feeds read it on their own).
RunRecord run_sequence(Tracker& tracker, Segmenter& segmenter, const Sequence& seq,
                       ObjectId object_id, const PipelineConfig& cfg);

// Assigns each pixel to the object with the highest confidence when that
// confidence exceeds bg_tau; equal maxima go to the lowest id. The returned
// masks are pairwise disjoint.
std::map<ObjectId, BinaryMask> fuse_multiobject(const std::map<ObjectId, ProbMap>& maps,
                                                double bg_tau);

struct SpeedStats {
  double mean_s = 0.0;
  double fps = 0.0;
  std::size_t frames = 0;
};

// Mean of t_track + t_segment over frames. Throws UsageError when the run
// was not timed or has no frames.
SpeedStats measure_speed(const RunRecord& record);
// Tracker-only speed: mean of t_track.
SpeedStats measure_tracker_speed(const RunRecord& record);
// Speed from raw per-frame durations (seconds).
SpeedStats speed_from_durations(const std::vector<double>& seconds);

// Segmenter alone: crops around the ground-truth box of every frame t >= 1
// and times only the segment() calls.
SpeedStats measure_segmenter_speed(Segmenter& segmenter, const Sequence& seq,
                                   ObjectId object_id, double k);

}  // namespace segtrack
