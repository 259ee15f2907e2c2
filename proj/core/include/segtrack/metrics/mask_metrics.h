#pragma once

#include <cstddef>
#include <vector>

#include "segtrack/core/raster.h"

namespace segtrack {

// |a & b| / |a | b|; 1 when both masks are empty. Throws ContractError on a
// size mismatch.
double iou(const BinaryMask& a, const BinaryMask& b);

// Positive pixels with at least one 4-neighbour that is background. Pixels
// outside the image count as background.
BinaryMask boundary_pixels(const BinaryMask& mask);

// Boundary F-measure with distance tolerance theta (pixels, Euclidean).
// Both boundaries empty gives 1. Throws ContractError on a size mismatch and
// ParameterError on a negative theta.
double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double theta);

// 0.8% of the image diagonal.
double default_boundary_theta(int width, int height);

struct FrameScore {
  double j = 0.0;
  double f = 0.0;
  bool valid = false;  // ground truth non-empty
};

// Scores one frame; frames with empty ground truth are marked invalid and
// left at 0.
FrameScore score_frame(const BinaryMask& pred, const BinaryMask& gt, double theta);

struct MeasureStats {
  double mean = 0.0;
  double recall = 0.0;
  double decay = 0.0;
  // Fewer than 4 scores: decay is reported as 0.
  bool short_sequence = false;
};

// Mean, fraction of scores > 0.5, and mean(first quartile) - mean(last
// quartile). Quartiles are 4 contiguous bins in the given order; the
// remainder of n/4 goes to the earliest bins. Throws ContractError on an
// empty list.
MeasureStats measure_stats(const std::vector<double>& scores);

struct DavisScores {
  MeasureStats j;
  MeasureStats f;
  std::size_t frames = 0;  // valid frames scored
};

// J and F statistics over the valid frames of a prediction stream.
// `preds[i]` is compared with `gts[i]`.
DavisScores davis_scores(const std::vector<BinaryMask>& preds,
                         const std::vector<BinaryMask>& gts, double theta);

}  // namespace segtrack
