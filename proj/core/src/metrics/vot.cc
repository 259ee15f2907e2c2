#include "segtrack/metrics/vot.h"

#include "segtrack/error.h"

namespace segtrack {

std::vector<Anchor> vot_anchors(std::size_t seq_len, std::size_t interval) {
  if (interval < 1) throw ParameterError("vot_anchors: interval must be >= 1");
  std::vector<Anchor> out;
  for (std::size_t a = 0; a < seq_len; a += interval) {
    out.push_back({a, seq_len - a >= a + 1 ? Direction::Forward : Direction::Backward});
  }
  return out;
}

std::size_t subsequence_length(const Anchor& anchor, std::size_t seq_len) {
  return anchor.direction == Direction::Forward ? seq_len - anchor.frame - 1
                                                : anchor.frame;
}

VotRun make_vot_run(std::size_t anchor_frame, Direction direction,
                    const std::vector<double>& overlaps, double fail_tau) {
  VotRun run{anchor_frame, direction, {}, std::nullopt};
  for (std::size_t i = 0; i < overlaps.size(); ++i) {
    run.overlaps.push_back(overlaps[i]);
    if (overlaps[i] < fail_tau) {
      run.failed_at = i;
      break;
    }
  }
  return run;
}

VotScores vot_evaluate(const std::vector<VotRun>& runs,
                       const std::vector<std::size_t>& lengths, const VotParams& params) {
  if (runs.empty()) throw ContractError("vot_evaluate: no runs");
  if (runs.size() != lengths.size()) {
    throw ContractError("vot_evaluate: one subsequence length per run required");
  }
  if (params.eao_lo > params.eao_hi || params.eao_lo < 1) {
    throw ParameterError("vot_evaluate: EAO window must satisfy 1 <= lo <= hi");
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const VotRun& r = runs[i];
    if (r.overlaps.size() > lengths[i] ||
        (r.failed_at && *r.failed_at >= r.overlaps.size())) {
      throw ContractError("vot_evaluate: run overlaps inconsistent with its length");
    }
  }

  VotScores s;
  double acc_sum = 0.0;
  std::size_t acc_n = 0;
  std::size_t tracked = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const VotRun& r = runs[i];
    for (std::size_t f = params.burn_in; f < r.tracked(); ++f) {
      acc_sum += r.overlaps[f];
      ++acc_n;
    }
    tracked += r.tracked();
    total += lengths[i];
  }
  s.accuracy = acc_n > 0 ? acc_sum / static_cast<double>(acc_n) : 0.0;
  s.robustness = total > 0 ? static_cast<double>(tracked) / static_cast<double>(total) : 1.0;

  double eao_sum = 0.0;
  for (std::size_t n = params.eao_lo; n <= params.eao_hi; ++n) {
    double phi_sum = 0.0;
    std::size_t phi_n = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const VotRun& r = runs[i];
      if (!r.failed_at && lengths[i] < n) continue;
      const std::size_t upto = std::min(n, r.tracked());
      double sum = 0.0;
      for (std::size_t f = 0; f < upto; ++f) sum += r.overlaps[f];
      phi_sum += sum / static_cast<double>(n);
      ++phi_n;
    }
    if (phi_n == 0) continue;
    eao_sum += phi_sum / static_cast<double>(phi_n);
    ++s.eao_lengths;
  }
  s.eao = s.eao_lengths > 0 ? eao_sum / static_cast<double>(s.eao_lengths) : 0.0;
  return s;
}

}  // namespace segtrack
