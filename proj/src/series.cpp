#include "infodelta/series.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "infodelta/csv.hpp"
#include "infodelta/error.hpp"

namespace infodelta {

std::pair<RawSeries, EngagementSeries> aggregate_weekly(const std::vector<PostRecord>& posts,
                                                         const std::string& subtopic_id, Platform platform,
                                                         const Window& window) {
  // re-validate: Window can be brace-constructed without make()
  Window::make(window.first, window.last);
  const std::size_t n = window.weeks();

  RawSeries counts;
  counts.subtopic_id = subtopic_id;
  counts.source = source_of(platform).value_or(Source::Facebook);
  counts.values.assign(n, 0);

  EngagementSeries engagement;
  engagement.subtopic_id = subtopic_id;
  engagement.platform = platform;
  engagement.engagement_sum.assign(n, 0);
  engagement.post_count.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) counts.week_start.push_back(window.week_at(i));
  engagement.week_start = counts.week_start;

  for (const auto& post : posts) {
    if (post.platform != platform || post.subtopic_id != subtopic_id) continue;
    Date week = week_of(post.posted_at);
    if (!window.contains_week(week)) continue;
    std::size_t i = window.index_of(week);
    ++counts.values[i];
    ++engagement.post_count[i];
    engagement.engagement_sum[i] += post.total_engagement;
  }
  return {std::move(counts), std::move(engagement)};
}

NormalizedSeries rescale(const RawSeries& series) {
  NormalizedSeries out;
  out.subtopic_id = series.subtopic_id;
  out.source = series.source;
  out.week_start = series.week_start;
  out.values.reserve(series.values.size());

  std::int64_t max = 0;
  for (auto v : series.values) {
    if (v < 0) throw std::invalid_argument("rescale: negative value in " + series.subtopic_id);
    max = std::max(max, v);
  }
  if (max == 0) {
    out.values.assign(series.values.size(), 0);
    out.degenerate = true;
    return out;
  }
  // floor(100 s / max + 1/2) == floor((200 s + max) / (2 max)), exact in integers
  for (auto v : series.values) out.values.push_back(static_cast<int>((200 * v + max) / (2 * max)));
  return out;
}

NormalizedSeries as_normalized(const RawSeries& series) {
  NormalizedSeries out;
  out.subtopic_id = series.subtopic_id;
  out.source = series.source;
  out.week_start = series.week_start;
  bool any = false;
  for (auto v : series.values) {
    if (v < 0 || v > 100) throw std::invalid_argument("value outside 0..100 in " + series.subtopic_id);
    out.values.push_back(static_cast<int>(v));
    any = any || v > 0;
  }
  out.degenerate = !any;
  return out;
}

AlignedPair align(const NormalizedSeries& a, const NormalizedSeries& b) {
  if (a.week_start.empty() || b.week_start.empty()) throw NoOverlap();
  require_consecutive_weeks(a.week_start);
  require_consecutive_weeks(b.week_start);
  Date first = std::max(a.week_start.front(), b.week_start.front());
  Date last = std::min(a.week_start.back(), b.week_start.back());
  if (first > last) throw NoOverlap();

  auto offset = [](const NormalizedSeries& s, Date d) {
    return static_cast<std::size_t>((d - s.week_start.front()).count() / 7);
  };
  const std::size_t n = static_cast<std::size_t>((last - first).count() / 7 + 1);
  AlignedPair out;
  const std::size_t ia = offset(a, first), ib = offset(b, first);
  out.week_start.assign(a.week_start.begin() + static_cast<long>(ia), a.week_start.begin() + static_cast<long>(ia + n));
  out.a.assign(a.values.begin() + static_cast<long>(ia), a.values.begin() + static_cast<long>(ia + n));
  out.b.assign(b.values.begin() + static_cast<long>(ib), b.values.begin() + static_cast<long>(ib + n));
  return out;
}

std::int64_t cumulative(const NormalizedSeries& series) {
  return std::accumulate(series.values.begin(), series.values.end(), std::int64_t{0});
}

std::string_view to_string(Balance b) {
  switch (b) {
    case Balance::DemandExceedsSupply: return "demand>supply";
    case Balance::SupplyExceedsDemand: return "supply>demand";
    case Balance::Equal: return "equal";
  }
  return "equal";
}

Balance compare_cumulative(const NormalizedSeries& supply, const NormalizedSeries& demand) {
  auto s = cumulative(supply), d = cumulative(demand);
  if (d > s) return Balance::DemandExceedsSupply;
  if (s > d) return Balance::SupplyExceedsDemand;
  return Balance::Equal;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

template <typename Values>
void write_values(const std::filesystem::path& path, const std::string& id, Source source,
                  const std::vector<Date>& weeks, const Values& values) {
  auto out = open_out(path);
  out << "subtopic_id,source,week_start,value\n";
  for (std::size_t i = 0; i < weeks.size(); ++i)
    csv::write_row(out, {id, std::string(to_string(source)), format_date(weeks[i]), std::to_string(values[i])});
}

struct CsvFile {
  std::ifstream in;
  csv::Reader reader;
  explicit CsvFile(const std::filesystem::path& path) : in(path, std::ios::binary), reader(in) {
    if (!in) throw IoError("cannot open " + path.string());
  }
};

std::int64_t parse_count(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw FormatError("expected integer, got '" + text + "'", line);
  }
  if (used != text.size()) throw FormatError("expected integer, got '" + text + "'", line);
  if (v < 0) throw RangeError("negative value " + text, line);
  return v;
}

Date parse_week(const std::string& text, std::size_t line) {
  try {
    return parse_date(text);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what(), line);
  }
}

}  // namespace

void write_series_csv(const std::filesystem::path& path, const RawSeries& series) {
  write_values(path, series.subtopic_id, series.source, series.week_start, series.values);
}

void write_series_csv(const std::filesystem::path& path, const NormalizedSeries& series) {
  write_values(path, series.subtopic_id, series.source, series.week_start, series.values);
}

RawSeries read_series_csv(const std::filesystem::path& path) {
  CsvFile file(path);
  csv::Row row;
  if (!file.reader.next(row)) throw EmptyFile(path.string());
  if (row.fields != std::vector<std::string>{"subtopic_id", "source", "week_start", "value"})
    throw SchemaError(path.string() + ": unexpected series header");
  RawSeries out;
  bool first = true;
  while (file.reader.next(row)) {
    if (row.fields.size() != 4) throw FormatError("expected 4 fields", row.line);
    if (first) {
      out.subtopic_id = row.fields[0];
      try {
        out.source = parse_source(row.fields[1]);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), row.line);
      }
      first = false;
    }
    out.week_start.push_back(parse_week(row.fields[2], row.line));
    out.values.push_back(parse_count(row.fields[3], row.line));
  }
  require_consecutive_weeks(out.week_start);
  return out;
}

void write_engagement_csv(const std::filesystem::path& path, const EngagementSeries& series) {
  auto out = open_out(path);
  out << "subtopic_id,source,week_start,engagement_sum,post_count\n";
  for (std::size_t i = 0; i < series.week_start.size(); ++i)
    csv::write_row(out, {series.subtopic_id, std::string(to_string(series.platform)),
                         format_date(series.week_start[i]), std::to_string(series.engagement_sum[i]),
                         std::to_string(series.post_count[i])});
}

EngagementSeries read_engagement_csv(const std::filesystem::path& path) {
  CsvFile file(path);
  csv::Row row;
  if (!file.reader.next(row)) throw EmptyFile(path.string());
  if (row.fields != std::vector<std::string>{"subtopic_id", "source", "week_start", "engagement_sum", "post_count"})
    throw SchemaError(path.string() + ": unexpected engagement header");
  EngagementSeries out;
  bool first = true;
  while (file.reader.next(row)) {
    if (row.fields.size() != 5) throw FormatError("expected 5 fields", row.line);
    if (first) {
      out.subtopic_id = row.fields[0];
      try {
        out.platform = parse_platform(row.fields[1]);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), row.line);
      }
      first = false;
    }
    out.week_start.push_back(parse_week(row.fields[2], row.line));
    out.engagement_sum.push_back(parse_count(row.fields[3], row.line));
    out.post_count.push_back(parse_count(row.fields[4], row.line));
  }
  require_consecutive_weeks(out.week_start);
  return out;
}

}  // namespace infodelta
