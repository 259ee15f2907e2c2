#pragma once

#include <map>
#include <string>
#include <vector>

namespace segtrack {

// String key/value parameters for one component, with typed lookups that
// throw ConfigError naming the offending key.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values)
      : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
  }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list of reals.
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  std::map<std::string, std::string> values_;
};

// Names a component (tracker or segmenter) and its parameters.
struct ComponentSpec {
  std::string name;
  Params params;
};

// Splits on commas and trims whitespace; empty items are dropped.
std::vector<std::string> split_list(const std::string& text);

}  // namespace segtrack
