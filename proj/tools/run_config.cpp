#include "run_config.hpp"

#include <cmath>
#include <limits>

#include "twistlab/error.hpp"

namespace twistlab::cli {

namespace {

double parse_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != t.size()) throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
  return v;
}

i64 parse_integer(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  i64 v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != t.size()) throw ConfigError("config key '" + key + "': '" + s + "' is not an integer");
  return v;
}

}  // namespace

void RunConfig::load(const std::filesystem::path& path) {
  for (const auto& [k, v] : read_key_values(path)) raw_[k] = v;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) {
  const auto it = raw_.find(key);
  const std::string v = it == raw_.end() ? fallback : trim(it->second);
  used_[key] = v;
  return v;
}

i64 RunConfig::integer(const std::string& key, i64 fallback) {
  return parse_integer(key, text(key, std::to_string(fallback)));
}

double RunConfig::real(const std::string& key, double fallback) {
  return parse_real(key, text(key, fmt17(fallback)));
}

std::vector<std::string> RunConfig::list(const std::string& key, const std::string& fallback) {
  std::vector<std::string> out;
  for (const auto& item : split(text(key, fallback), ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::vector<double> RunConfig::reals(const std::string& key, const std::string& fallback) {
  std::vector<double> out;
  for (const auto& item : list(key, fallback)) out.push_back(parse_real(key, item));
  return out;
}

std::vector<i64> RunConfig::integers(const std::string& key, const std::string& fallback) {
  std::vector<i64> out;
  for (const auto& item : list(key, fallback)) out.push_back(parse_integer(key, item));
  return out;
}

std::vector<std::string> RunConfig::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : raw_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

}  // namespace twistlab::cli
