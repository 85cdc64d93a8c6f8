#pragma once

#include <string>
#include <vector>

namespace cscgd::harness {

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double v);

/// Row-oriented CSV text with LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  /// Writes the text byte-for-byte; throws std::runtime_error on failure.
  void save(const std::string& path) const;

 private:
  std::size_t columns_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace cscgd::harness
