#pragma once

#include <exception>
#include <map>
#include <optional>
#include <filesystem>
#include <string>
#include <vector>

#include "segtrack/bench/config.h"
#include "segtrack/metrics/mask_metrics.h"
#include "segtrack/pipeline/pipeline.h"

namespace segtrack {

inline constexpr const char* kLibraryVersion = "0.1.0";
// Sequence name used for rows aggregated over the whole dataset.
inline constexpr const char* kAllSequences = "ALL";

struct ScoreRow {
  std::string tracker;
  std::string segmenter;
  double k = 0.0;
  std::string sequence;
  std::string measure;  // J_M J_R J_D F_M F_R F_D | A R EAO | frames
  double value = 0.0;

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

struct BenchmarkResult {
  std::vector<ScoreRow> rows;  // per-sequence rows, then the ALL rows, per combination
  std::string config_hash;
  bool partial = false;        // a job failed; rows cover finished jobs only
  std::string error;           // context of the first failure
};

// Runs every (tracker, segmenter, k, sequence) job of the config on
// `sequences` with cfg.workers threads and merges results in job order, so
// the output does not depend on completion order. Writes masks/manifests
// under cfg.output_dir when enabled. On a job failure the remaining jobs
// are skipped and the partial result is returned together with the
// exception (`failure` non-null).
BenchmarkResult evaluate_benchmark(const BenchConfig& cfg,
                                   const std::vector<Sequence>& sequences,
                                   std::exception_ptr* failure);

// Loads the dataset, evaluates, writes the reports (also when partial) and
// rethrows a failure with its job context. `sweep` adds sweep.csv and uses
// the default k axis unless the config sets one.
BenchmarkResult run_benchmark(const BenchConfig& cfg, bool sweep = false);

// VOT anchor runs of one object: one run per anchor with non-empty ground
// truth, each stopped at its first overlap < fail_tau. `lengths` receives
// the subsequence length of every run.
std::vector<VotRun> vot_sequence_runs(const Sequence& seq, ObjectId id,
                                      const ComponentSpec& tracker,
                                      const ComponentSpec& segmenter, double k, double tau,
                                      const VotParams& params,
                                      std::vector<std::size_t>* lengths);

// Per-object DAVIS scores of one sequence: every object is run
// independently, the confidences are fused per frame, and each object's
// fused masks on frames >= 1 are scored. Objects without ground truth after
// frame 0 are skipped.
struct ObjectScore {
  ObjectId id = 0;
  DavisScores scores;
};
std::vector<ObjectScore> davis_sequence_scores(const Sequence& seq,
                                               const ComponentSpec& tracker,
                                               const ComponentSpec& segmenter, double k,
                                               double tau, std::optional<double> theta,
                                               std::vector<RunRecord>* records = nullptr,
                                               std::vector<std::map<ObjectId, BinaryMask>>*
                                                   fused = nullptr);

// Timing table: tracker alone, tracker + segmenter, and segmenter alone
// ("none" in the missing column). Frames are pooled over the dataset.
struct SpeedRow {
  std::string tracker;
  std::string segmenter;
  SpeedStats stats;
};
std::vector<SpeedRow> run_speed(const BenchConfig& cfg, const std::vector<Sequence>& sequences);

// Scores masks written as indexed PNGs in pred_dir/<sequence>/ (one per
// frame, or one per frame after the first) against the dataset.
std::vector<ScoreRow> evaluate_mask_dirs(const std::vector<Sequence>& sequences,
                                         const std::filesystem::path& pred_dir,
                                         std::optional<double> theta,
                                         const std::string& label);

// Mean of per-object DAVIS statistics as rows.
std::vector<ScoreRow> davis_rows(const std::vector<DavisScores>& objects,
                                 const std::string& tracker, const std::string& segmenter,
                                 double k, const std::string& sequence);

}  // namespace segtrack
