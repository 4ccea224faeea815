#include "infodelta/csv.hpp"

#include "infodelta/error.hpp"

namespace infodelta::csv {

bool Reader::getline(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_;
  if (!bom_checked_) {
    bom_checked_ = true;
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  }
  return true;
}

bool Reader::raw_line(std::string& line) {
  if (!getline(line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool Reader::next(Row& row) {
  std::string line;
  if (!getline(line)) return false;
  row.fields.clear();
  row.line = line_;

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // quoted field spans a newline
      std::string more;
      if (!getline(more)) throw FormatError("unterminated quoted field", row.line);
      field += '\n';
      line = std::move(more);
      i = 0;
      continue;
    }
    char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '\r' && i == line.size()) {
      // CRLF terminator; a CR inside quotes is kept as data
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  row.fields.push_back(std::move(field));
  return true;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace infodelta::csv
