#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "segtrack/bench/decompose.h"
#include "segtrack/bench/runner.h"

namespace segtrack {

// Fixed-precision text for CSV cells.
std::string format_value(double v);

std::string scores_csv(const std::vector<ScoreRow>& rows);
// ALL rows without the oracle segmenter.
std::string leaderboard_csv(const std::vector<ScoreRow>& rows);
// One row per (tracker, segmenter, k) with one column per measure.
std::string sweep_csv(const std::vector<ScoreRow>& rows);
std::string speed_csv(const std::vector<SpeedRow>& rows);
// Provenance (schema, config hash, versions, seed, protocol constants) and
// the rows.
std::string report_json(const BenchConfig& cfg, const BenchmarkResult& result);

// Writes scores.csv, leaderboard.csv, report.json and, for sweeps,
// sweep.csv into cfg.output_dir.
void write_reports(const BenchConfig& cfg, const BenchmarkResult& result, bool sweep);

// Rows stored in a report.json. Throws DataError on unreadable files.
std::vector<ScoreRow> read_report_rows(const std::filesystem::path& path);

// Finds the ALL row of a combination. Throws DataError when absent.
double lookup_score(const std::vector<ScoreRow>& rows, const std::string& tracker,
                    const std::string& segmenter, double k, const std::string& measure);

// decompose_error over aggregate report rows; the oracle is the tracker
// named "oracle" and the baseline segmenter is "rect".
ErrorDecomposition decompose_from_rows(const std::vector<ScoreRow>& rows,
                                       const std::string& tracker,
                                       const std::string& segmenter, double k,
                                       const std::string& measure);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace segtrack
