#pragma once

// Flat key=value run configuration: file values, then command-line overrides.
// Every getter records the effective value (defaults included) for the run manifest.

#include <filesystem>
#include <string>
#include <vector>

#include "twistlab/arith.hpp"
#include "twistlab/io.hpp"

namespace twistlab::cli {

class RunConfig {
 public:
  void load(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value) { raw_[key] = value; }
  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback);
  i64 integer(const std::string& key, i64 fallback);
  double real(const std::string& key, double fallback);
  std::vector<std::string> list(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key, const std::string& fallback);
  std::vector<i64> integers(const std::string& key, const std::string& fallback);

  /// Keys present in the file or flags that no command consumed.
  std::vector<std::string> unused() const;
  const KeyValues& effective() const { return used_; }

 private:
  KeyValues raw_;
  KeyValues used_;
};

}  // namespace twistlab::cli
