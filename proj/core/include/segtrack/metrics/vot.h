#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace segtrack {

enum class Direction { Forward, Backward };

struct Anchor {
  std::size_t frame = 0;
  Direction direction = Direction::Forward;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

// Anchors at 0, interval, 2*interval, ... below seq_len. Each runs towards
// the longer side: forward when seq_len - anchor >= anchor + 1. Throws
// ParameterError for interval < 1.
std::vector<Anchor> vot_anchors(std::size_t seq_len, std::size_t interval = 50);

// Number of frames predicted after the anchor in its direction.
std::size_t subsequence_length(const Anchor& anchor, std::size_t seq_len);

struct VotRun {
  std::size_t anchor_frame = 0;
  Direction direction = Direction::Forward;
  // Overlaps of the predicted frames, starting with the first frame after
  // the anchor. When the run failed the list ends with the failure frame.
  std::vector<double> overlaps;
  std::optional<std::size_t> failed_at;  // index into overlaps

  // Frames tracked before failure.
  std::size_t tracked() const { return failed_at ? *failed_at : overlaps.size(); }
};

// Truncates a full overlap trace at the first value < fail_tau.
VotRun make_vot_run(std::size_t anchor_frame, Direction direction,
                    const std::vector<double>& overlaps, double fail_tau);

struct VotParams {
  double fail_tau = 0.1;
  std::size_t burn_in = 10;
  std::size_t interval = 50;
  std::size_t eao_lo = 115;
  std::size_t eao_hi = 755;
};

struct VotScores {
  double accuracy = 0.0;
  double robustness = 0.0;
  double eao = 0.0;
  // Sequence lengths in [eao_lo, eao_hi] that had at least one qualifying
  // run. 0 means no run was long enough and eao is reported as 0.
  std::size_t eao_lengths = 0;
};

// Accuracy: mean overlap over tracked frames of all runs, skipping the first
// burn_in frames of each run and every frame at or after failure.
// Robustness: sum of tracked frames over sum of subsequence lengths.
// EAO: mean over N in [eao_lo, eao_hi] of Phi(N), the average over runs of
// the mean overlap on the first N frames; failed runs are zero-padded after
// the failure, unfailed runs shorter than N are left out.
// `lengths[i]` is the subsequence length of runs[i]. Throws ContractError on
// empty or mismatched input.
VotScores vot_evaluate(const std::vector<VotRun>& runs,
                       const std::vector<std::size_t>& lengths, const VotParams& params);

}  // namespace segtrack
