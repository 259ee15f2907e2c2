#include "segtrack/bench/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "segtrack/error.h"

namespace segtrack {
namespace {

using ojson = nlohmann::ordered_json;

std::string k_text(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

ojson row_json(const ScoreRow& r) {
  return ojson{{"tracker", r.tracker}, {"segmenter", r.segmenter}, {"k", r.k},
               {"sequence", r.sequence}, {"measure", r.measure}, {"value", r.value}};
}

ojson params_json(const std::vector<ComponentSpec>& specs) {
  ojson out = ojson::array();
  for (const auto& s : specs) {
    ojson p = ojson::object();
    for (const auto& [k, v] : s.params.values()) p[k] = v;
    out.push_back({{"name", s.name}, {"params", p}});
  }
  return out;
}

}  // namespace

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "tracker,segmenter,k,sequence,measure,value\n";
  for (const ScoreRow& r : rows) {
    out += r.tracker + "," + r.segmenter + "," + k_text(r.k) + "," + r.sequence + "," +
           r.measure + "," + format_value(r.value) + "\n";
  }
  return out;
}

std::string leaderboard_csv(const std::vector<ScoreRow>& rows) {
  std::vector<ScoreRow> kept;
  for (const ScoreRow& r : rows) {
    if (r.sequence == kAllSequences && r.segmenter != "oracle") kept.push_back(r);
  }
  return scores_csv(kept);
}

std::string sweep_csv(const std::vector<ScoreRow>& rows) {
  // Column order follows the first appearance of each measure.
  std::vector<std::string> measures;
  std::vector<std::tuple<std::string, std::string, double>> combos;
  std::map<std::tuple<std::string, std::string, double>, std::map<std::string, double>> cells;
  for (const ScoreRow& r : rows) {
    if (r.sequence != kAllSequences) continue;
    if (std::find(measures.begin(), measures.end(), r.measure) == measures.end()) {
      measures.push_back(r.measure);
    }
    const auto key = std::make_tuple(r.tracker, r.segmenter, r.k);
    if (cells.find(key) == cells.end()) combos.push_back(key);
    cells[key][r.measure] = r.value;
  }
  std::string out = "tracker,segmenter,k";
  for (const auto& m : measures) out += "," + m;
  out += "\n";
  for (const auto& key : combos) {
    out += std::get<0>(key) + "," + std::get<1>(key) + "," + k_text(std::get<2>(key));
    const auto& c = cells[key];
    for (const auto& m : measures) {
      const auto it = c.find(m);
      out += "," + (it == c.end() ? std::string() : format_value(it->second));
    }
    out += "\n";
  }
  return out;
}

std::string speed_csv(const std::vector<SpeedRow>& rows) {
  std::string out = "tracker,segmenter,frames,mean_s,fps\n";
  for (const SpeedRow& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.2f", r.stats.frames, r.stats.mean_s,
                  r.stats.fps);
    out += r.tracker + "," + r.segmenter + "," + buf + "\n";
  }
  return out;
}

std::string report_json(const BenchConfig& cfg, const BenchmarkResult& result) {
  ojson j;
  j["schema_version"] = kReportSchemaVersion;
  ojson prov;
  prov["config_hash"] = result.config_hash;
  prov["library_version"] = kLibraryVersion;
  prov["seed"] = cfg.seed;
  prov["dataset"] = {{"kind", std::string(to_string(cfg.dataset.kind))},
                     {"root", cfg.dataset.root.string()},
                     {"split", cfg.dataset.split}};
  prov["trackers"] = params_json(cfg.trackers);
  prov["segmenters"] = params_json(cfg.segmenters);
  ojson proto;
  proto["name"] = std::string(to_string(cfg.protocol));
  proto["tau"] = cfg.tau;
  if (cfg.protocol == Protocol::VotAnchors) {
    proto["fail_tau"] = cfg.vot.fail_tau;
    proto["burn_in"] = cfg.vot.burn_in;
    proto["interval"] = cfg.vot.interval;
    proto["eao_lo"] = cfg.vot.eao_lo;
    proto["eao_hi"] = cfg.vot.eao_hi;
  } else if (cfg.theta) {
    proto["theta"] = *cfg.theta;
  } else {
    proto["theta"] = "0.008*diagonal";
  }
  prov["protocol"] = proto;
  j["provenance"] = prov;
  j["partial"] = result.partial;
  if (result.partial) j["error"] = result.error;
  ojson agg = ojson::array();
  ojson per = ojson::array();
  for (const ScoreRow& r : result.rows) {
    (r.sequence == kAllSequences ? agg : per).push_back(row_json(r));
  }
  j["aggregate"] = std::move(agg);
  j["sequences"] = std::move(per);
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

void write_reports(const BenchConfig& cfg, const BenchmarkResult& result, bool sweep) {
  write_text(cfg.output_dir / "scores.csv", scores_csv(result.rows));
  write_text(cfg.output_dir / "leaderboard.csv", leaderboard_csv(result.rows));
  write_text(cfg.output_dir / "report.json", report_json(cfg, result));
  if (sweep) write_text(cfg.output_dir / "sweep.csv", sweep_csv(result.rows));
}

std::vector<ScoreRow> read_report_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report " + path.string());
  std::vector<ScoreRow> rows;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const char* part : {"sequences", "aggregate"}) {
      if (!j.contains(part)) continue;
      for (const auto& r : j.at(part)) {
        rows.push_back({r.at("tracker").get<std::string>(), r.at("segmenter").get<std::string>(),
                        r.at("k").get<double>(), r.at("sequence").get<std::string>(),
                        r.at("measure").get<std::string>(), r.at("value").get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed report " + path.string() + ": " + e.what());
  }
  return rows;
}

double lookup_score(const std::vector<ScoreRow>& rows, const std::string& tracker,
                    const std::string& segmenter, double k, const std::string& measure) {
  for (const ScoreRow& r : rows) {
    if (r.sequence == kAllSequences && r.tracker == tracker && r.segmenter == segmenter &&
        std::abs(r.k - k) < 1e-9 && r.measure == measure) {
      return r.value;
    }
  }
  throw DataError("no " + measure + " score for " + tracker + "/" + segmenter + " at k=" +
                  k_text(k) + " in the reports");
}

ErrorDecomposition decompose_from_rows(const std::vector<ScoreRow>& rows,
                                       const std::string& tracker,
                                       const std::string& segmenter, double k,
                                       const std::string& measure) {
  return decompose_error(lookup_score(rows, "oracle", "rect", k, measure),
                         lookup_score(rows, tracker, "rect", k, measure),
                         lookup_score(rows, "oracle", segmenter, k, measure),
                         lookup_score(rows, tracker, segmenter, k, measure), measure);
}

}  // namespace segtrack
