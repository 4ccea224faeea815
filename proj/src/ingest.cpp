#include "infodelta/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "infodelta/csv.hpp"
#include "infodelta/error.hpp"

namespace infodelta {

std::string_view to_string(SkippedRow::Reason r) {
  return r == SkippedRow::Reason::OutOfWindow ? "out_of_window" : "row_error";
}

namespace {

std::int64_t parse_non_negative(const std::string& text, const char* column) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(column) + ": not an integer '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument(std::string(column) + ": not an integer '" + text + "'");
  if (v < 0) throw std::invalid_argument(std::string(column) + ": negative value " + text);
  return v;
}

PostRecord parse_post(const csv::Row& row) {
  if (row.fields.size() != kPostColumns.size())
    throw std::invalid_argument("expected " + std::to_string(kPostColumns.size()) + " fields, got " +
                                std::to_string(row.fields.size()));
  PostRecord p;
  p.platform = parse_platform(row.fields[0]);
  p.posted_at = parse_rfc3339(row.fields[1]);
  p.account_id = row.fields[2];
  p.followers_at_post = parse_non_negative(row.fields[3], "followers_at_post");
  p.total_engagement = parse_non_negative(row.fields[4], "total_engagement");
  p.text = row.fields[5];
  return p;
}

}  // namespace

PostReadResult read_posts(const std::filesystem::path& path, const Window& window) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  csv::Reader reader(in);
  csv::Row row;
  if (!reader.next(row)) throw SchemaError(path.string() + ": missing header");
  if (row.fields != kPostColumns) {
    std::string missing;
    for (const auto& c : kPostColumns)
      if (std::find(row.fields.begin(), row.fields.end(), c) == row.fields.end()) missing += " " + c;
    throw SchemaError(path.string() + ": header must be exactly platform,posted_at,account_id,"
                                      "followers_at_post,total_engagement,text" +
                      (missing.empty() ? std::string() : "; missing:" + missing));
  }

  PostReadResult result;
  const auto file = path.string();
  while (true) {
    try {
      if (!reader.next(row)) break;
    } catch (const FormatError& e) {
      result.skipped.push_back({file, e.line(), SkippedRow::Reason::RowError, e.what()});
      break;
    }
    PostRecord post;
    try {
      post = parse_post(row);
    } catch (const std::invalid_argument& e) {
      result.skipped.push_back({file, row.line, SkippedRow::Reason::RowError, e.what()});
      continue;
    }
    if (!window.contains(post.posted_at)) {
      result.skipped.push_back({file, row.line, SkippedRow::Reason::OutOfWindow, format_rfc3339(post.posted_at)});
      continue;
    }
    result.posts.push_back(std::move(post));
  }
  return result;
}

void write_posts_csv(const std::filesystem::path& path, const std::vector<PostRecord>& posts) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  csv::write_row(out, kPostColumns);
  for (const auto& p : posts)
    csv::write_row(out, {std::string(to_string(p.platform)), format_rfc3339(p.posted_at), p.account_id,
                         std::to_string(p.followers_at_post), std::to_string(p.total_engagement), p.text});
}

std::vector<PostRecord> assign_subtopics(std::vector<PostRecord> posts, const Taxonomy& taxonomy) {
  const auto subtopics = taxonomy.subtopics();
  for (auto& post : posts) {
    post.subtopic_id.reset();
    TokenizedText doc(post.text);
    for (const auto* s : subtopics) {
      if (matches(s->post_query, doc)) {
        post.subtopic_id = s->id;
        break;
      }
    }
  }
  return posts;
}

RawSeries read_trends_csv(const std::filesystem::path& path, const std::string& subtopic_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  csv::Reader reader(in);

  std::string line;
  if (!reader.raw_line(line)) throw EmptyFile(path.string());
  if (!reader.raw_line(line)) throw EmptyFile(path.string());
  if (line.find_first_not_of(" \t,") != std::string::npos)
    throw FormatError("expected a blank line after the category header", reader.line());

  csv::Row row;
  if (!reader.next(row)) throw EmptyFile(path.string());
  if (row.fields.size() != 2 || (row.fields[0] != "Week" && row.fields[0] != "Settimana"))
    throw FormatError("expected header 'Week,<label>' or 'Settimana,<label>'", row.line);

  RawSeries out;
  out.subtopic_id = subtopic_id;
  out.source = Source::Trends;
  while (reader.next(row)) {
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // trailing blank line
    if (row.fields.size() != 2) throw FormatError("expected 'YYYY-MM-DD,value'", row.line);
    Date date;
    try {
      date = parse_date(row.fields[0]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what(), row.line);
    }
    const auto& text = row.fields[1];
    std::int64_t value = 0;
    if (text != "<1") {
      if (text.size() > 1 && text[0] == '-' &&
          std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw RangeError("value " + text + " outside 0..100", row.line);
      if (text.empty() || text.size() > 9 || !std::all_of(text.begin(), text.end(), [](char c) {
            return c >= '0' && c <= '9';
          }))
        throw FormatError("value must be an integer or '<1', got '" + text + "'", row.line);
      value = std::stoll(text);
      if (value > 100) throw RangeError("value " + text + " outside 0..100", row.line);
    }
    Date week = week_of(date);
    if (!out.week_start.empty() && week - out.week_start.back() != std::chrono::days{7})
      throw FormatError("week " + format_date(week) + " does not follow " + format_date(out.week_start.back()),
                        row.line);
    out.week_start.push_back(week);
    out.values.push_back(value);
  }
  if (out.values.empty()) throw EmptyFile(path.string());
  return out;
}

}  // namespace infodelta
