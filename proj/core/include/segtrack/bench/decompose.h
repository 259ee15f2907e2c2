#pragma once

#include <string>

namespace segtrack {

// Splits the gap between a tracker T and the box oracle into a localization
// part and a segmentation part, all on one measure P:
//   e_tracker   = P(oracle, rect) - P(T, rect)
//   e_segmenter = P(oracle, S) - (P(T, S) + e_tracker)
struct ErrorDecomposition {
  double e_tracker = 0.0;
  double e_segmenter = 0.0;
  std::string measure;
};

ErrorDecomposition decompose_error(double p_oracle_rect, double p_t_rect,
                                   double p_oracle_s, double p_t_s,
                                   std::string measure = {});

}  // namespace segtrack
