#include "segtrack/bench/config.h"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "segtrack/error.h"

namespace segtrack {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& fixed_sections() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"dataset", {"kind", "root", "split"}},
      {"synthetic",
       {"count", "frames", "width", "height", "shape", "obj_w", "obj_h", "vx", "vy",
        "texture", "noise", "bounce", "allow_exit", "seed"}},
      {"tracker", {"name"}},
      {"segmenter", {"name"}},
      {"pipeline", {"k", "tau"}},
      {"protocol", {"name", "fail_tau", "burn_in", "interval", "eao_lo", "eao_hi", "theta"}},
      {"output", {"dir", "masks", "manifests"}},
      {"run", {"workers", "seed"}},
  };
  return s;
}

bool is_component_section(const std::string& section) {
  return section.rfind("tracker.", 0) == 0 || section.rfind("segmenter.", 0) == 0;
}

void check_known(const std::string& section, const std::string& key) {
  if (is_component_section(section)) return;
  const auto it = fixed_sections().find(section);
  if (it == fixed_sections().end()) {
    throw ConfigError("config: unknown section [" + section + "]");
  }
  if (it->second.count(key) == 0) {
    throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
  }
}

// Section-scoped typed reads over the flat entry map.
class Section {
 public:
  Section(const std::map<std::string, std::string>& entries, std::string name)
      : name_(std::move(name)) {
    const std::string prefix = name_ + ".";
    for (const auto& [k, v] : entries) {
      if (k.rfind(prefix, 0) == 0 && k.find('.', prefix.size()) == std::string::npos) {
        params_.set(k.substr(prefix.size()), v);
      }
    }
  }
  const Params& params() const { return params_; }

 private:
  std::string name_;
  Params params_;
};

std::size_t get_size(const Params& p, const std::string& key, std::size_t fallback) {
  const int v = p.get_int(key, static_cast<int>(fallback));
  if (v < 0) throw ConfigError("config: " + key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view to_string(Protocol p) {
  return p == Protocol::DavisOpe ? "davis-ope" : "vot-anchors";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "davis-ope") return Protocol::DavisOpe;
  if (name == "vot-anchors") return Protocol::VotAnchors;
  throw ConfigError("unknown protocol '" + std::string(name) +
                    "' (expected davis-ope or vot-anchors)");
}

std::vector<double> BenchConfig::ks_for(const ComponentSpec& segmenter) const {
  if (segmenter.params.has("k")) return segmenter.params.get_doubles("k", ks);
  return ks;
}

BenchConfig parse_config(const std::string& ini_text,
                         const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  BenchConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) {
      check_known(section, key);
      c.entries[section + "." + key] = value.data();
    }
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const std::string path = o.substr(0, eq);
    const auto dot = path.rfind('.');
    if (eq == std::string::npos || dot == std::string::npos || dot == 0 ||
        dot + 1 == path.size()) {
      throw ConfigError("config override '" + o + "' must look like section.key=value");
    }
    check_known(path.substr(0, dot), path.substr(dot + 1));
    c.entries[path] = o.substr(eq + 1);
  }

  const Params ds = Section(c.entries, "dataset").params();
  c.dataset.kind = parse_dataset_kind(ds.get_string("kind", "synthetic"));
  c.dataset.root = ds.get_string("root", "");
  c.dataset.split = ds.get_string("split", "val");
  if (c.dataset.kind != DatasetKind::Synthetic && c.dataset.root.empty()) {
    throw ConfigError("config: dataset.root is required for " +
                      std::string(to_string(c.dataset.kind)) + " datasets");
  }

  const Params run = Section(c.entries, "run").params();
  c.workers = run.get_int("workers", 1);
  if (c.workers < 1) throw ConfigError("config: run.workers must be >= 1");
  const int seed = run.get_int("seed", 7);
  if (seed < 0) throw ConfigError("config: run.seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);

  const Params syn = Section(c.entries, "synthetic").params();
  SyntheticSpec& s = c.dataset.synthetic;
  c.dataset.synthetic_count = syn.get_int("count", 3);
  s.frames = syn.get_int("frames", s.frames);
  s.width = syn.get_int("width", s.width);
  s.height = syn.get_int("height", s.height);
  s.shape = parse_shape(syn.get_string("shape", "rect"));
  s.obj_w = syn.get_double("obj_w", s.obj_w);
  s.obj_h = syn.get_double("obj_h", s.obj_h);
  s.vx = syn.get_double("vx", s.vx);
  s.vy = syn.get_double("vy", s.vy);
  s.texture = syn.get_int("texture", s.texture);
  s.noise = syn.get_int("noise", s.noise);
  s.bounce = syn.get_bool("bounce", s.bounce);
  s.allow_exit = syn.get_bool("allow_exit", s.allow_exit);
  const int syn_seed = syn.get_int("seed", static_cast<int>(c.seed));
  if (syn_seed < 0) throw ConfigError("config: synthetic.seed must be >= 0");
  s.seed = static_cast<std::uint64_t>(syn_seed);
  if (c.dataset.synthetic_count < 1 || s.frames < 2 || s.width < 1 || s.height < 1 ||
      !(s.obj_w > 0) || !(s.obj_h > 0) || s.texture < 0 || s.noise < 0) {
    throw ConfigError("config: invalid [synthetic] values");
  }

  auto components = [&](const std::string& kind, const std::string& fallback) {
    std::vector<ComponentSpec> out;
    const Params p = Section(c.entries, kind).params();
    for (const std::string& name : split_list(p.get_string("name", fallback))) {
      out.push_back({name, Section(c.entries, kind + "." + name).params()});
    }
    if (out.empty()) throw ConfigError("config: " + kind + ".name lists no components");
    return out;
  };
  c.trackers = components("tracker", "kcf");
  c.segmenters = components("segmenter", "rect");

  const Params pipe = Section(c.entries, "pipeline").params();
  c.ks_explicit = pipe.has("k");
  c.ks = pipe.get_doubles("k", c.ks);
  c.tau = pipe.get_double("tau", c.tau);
  if (c.ks.empty()) throw ConfigError("config: pipeline.k is empty");
  for (const auto& seg : c.segmenters) {
    for (double k : c.ks_for(seg)) {
      if (!(k >= 1.0)) throw ConfigError("config: every k must be >= 1");
    }
  }
  if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw ConfigError("config: pipeline.tau must lie in [0,1]");

  const Params proto = Section(c.entries, "protocol").params();
  c.protocol = parse_protocol(proto.get_string("name", "davis-ope"));
  c.vot.fail_tau = proto.get_double("fail_tau", c.vot.fail_tau);
  c.vot.burn_in = get_size(proto, "burn_in", c.vot.burn_in);
  c.vot.interval = get_size(proto, "interval", c.vot.interval);
  c.vot.eao_lo = get_size(proto, "eao_lo", c.vot.eao_lo);
  c.vot.eao_hi = get_size(proto, "eao_hi", c.vot.eao_hi);
  if (c.vot.interval < 1) throw ConfigError("config: protocol.interval must be >= 1");
  if (c.vot.eao_lo < 1 || c.vot.eao_lo > c.vot.eao_hi) {
    throw ConfigError("config: protocol EAO window must satisfy 1 <= eao_lo <= eao_hi");
  }
  if (proto.has("theta")) {
    c.theta = proto.get_double("theta", 0.0);
    if (!(*c.theta >= 0.0)) throw ConfigError("config: protocol.theta must be >= 0");
  }

  const Params out = Section(c.entries, "output").params();
  c.output_dir = out.get_string("dir", c.output_dir.string());
  c.write_masks = out.get_bool("masks", false);
  c.write_manifests = out.get_bool("manifests", false);
  return c;
}

BenchConfig load_config(const std::filesystem::path& path,
                        const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

std::string config_hash(const BenchConfig& config) {
  std::string canonical = "schema=" + std::to_string(kReportSchemaVersion) + "\n";
  for (const auto& [k, v] : config.entries) canonical += k + "=" + v + "\n";
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("config hash: SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace segtrack
