#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace infodelta::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
/// Accepts LF or CRLF line endings and strips a leading UTF-8 BOM.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record. Returns false at end of input.
  /// Throws FormatError on an unterminated quoted field.
  bool next(Row& row);

  /// Reads one raw line without CSV interpretation (for preambles).
  bool raw_line(std::string& line);

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  bool bom_checked_ = false;

  bool getline(std::string& line);
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace infodelta::csv
