#include "segtrack/bench/decompose.h"

namespace segtrack {

ErrorDecomposition decompose_error(double p_oracle_rect, double p_t_rect,
                                   double p_oracle_s, double p_t_s, std::string measure) {
  ErrorDecomposition d;
  d.e_tracker = p_oracle_rect - p_t_rect;
  d.e_segmenter = p_oracle_s - (p_t_s + d.e_tracker);
  d.measure = std::move(measure);
  return d;
}

}  // namespace segtrack
