#pragma once

// Text I/O shared by data files, reports and the CLI: 17-significant-digit
// formatting, flat key=value files and atomic writes.

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace twistlab {

/// "%.17g": round-trips every double.
std::string fmt17(double x);

/// Writes to a sibling temp file then renames over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Ordered key=value map; '#' starts a comment, blank lines are skipped.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text, const std::string& source_name = "<input>");
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

/// Comma-separated, LF line endings, no quoting.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  CsvBuilder& row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace twistlab
