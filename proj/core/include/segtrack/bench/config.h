#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segtrack/bench/dataset.h"
#include "segtrack/metrics/vot.h"
#include "segtrack/params.h"

namespace segtrack {

enum class Protocol { DavisOpe, VotAnchors };

std::string_view to_string(Protocol p);
// "davis-ope" or "vot-anchors"; throws ConfigError otherwise.
Protocol parse_protocol(std::string_view name);

inline constexpr int kReportSchemaVersion = 1;

// The k axis of a sweep when the config does not set one.
inline const std::vector<double> kDefaultSweepKs = {1.0, 1.25, 1.5, 1.75, 2.0};

// Benchmark configuration. Read from INI text with the sections
//   [dataset] kind root split
//   [synthetic] count frames width height shape obj_w obj_h vx vy texture
//               noise bounce allow_exit seed
//   [tracker] name (comma list)        [tracker.<name>] component params
//   [segmenter] name (comma list)      [segmenter.<name>] component params;
//                                      a "k" list here overrides [pipeline]
//   [pipeline] k (comma list) tau
//   [protocol] name fail_tau burn_in interval eao_lo eao_hi theta
//   [output] dir masks manifests
//   [run] workers seed
struct BenchConfig {
  DatasetLayout dataset;
  std::vector<ComponentSpec> trackers;
  std::vector<ComponentSpec> segmenters;
  std::vector<double> ks{1.5};
  bool ks_explicit = false;
  double tau = 0.5;
  Protocol protocol = Protocol::DavisOpe;
  VotParams vot;
  std::optional<double> theta;  // boundary tolerance; default per frame size
  std::filesystem::path output_dir = "results";
  bool write_masks = false;
  bool write_manifests = false;
  int workers = 1;
  std::uint64_t seed = 7;

  // Every "section.key" -> value after overrides; the hashed provenance.
  std::map<std::string, std::string> entries;

  // k values for one segmenter (its own "k" list, else the pipeline's).
  std::vector<double> ks_for(const ComponentSpec& segmenter) const;
};

// Parses INI text and applies "section.key=value" overrides on top. Throws
// ConfigError on syntax errors, unknown sections or keys, and bad values.
BenchConfig parse_config(const std::string& ini_text,
                         const std::vector<std::string>& overrides = {});
BenchConfig load_config(const std::filesystem::path& path,
                        const std::vector<std::string>& overrides = {});

// Hex SHA-256 of the schema version and the sorted entries.
std::string config_hash(const BenchConfig& config);

}  // namespace segtrack
