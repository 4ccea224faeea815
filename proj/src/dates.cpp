#include "infodelta/dates.hpp"

#include <cstdio>
#include <stdexcept>

#include "infodelta/error.hpp"

namespace infodelta {

using namespace std::chrono;

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw std::invalid_argument("truncated date/time");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw std::invalid_argument("expected digit in '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c)
    throw std::invalid_argument("expected '" + std::string(1, c) + "' in '" + std::string(text) + "'");
}

Date make_date(int y, int m, int d) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  return sys_days{ymd};
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10) throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  int y = parse_digits(text, 0, 4);
  expect(text, 4, '-');
  int m = parse_digits(text, 5, 2);
  expect(text, 7, '-');
  int d = parse_digits(text, 8, 2);
  return make_date(y, m, d);
}

Timestamp parse_rfc3339(std::string_view text) {
  Date date = parse_date(text.substr(0, std::min<std::size_t>(10, text.size())));
  if (text.size() < 19 || (text[10] != 'T' && text[10] != 't' && text[10] != ' '))
    throw std::invalid_argument("expected RFC 3339 timestamp, got '" + std::string(text) + "'");
  int hh = parse_digits(text, 11, 2);
  expect(text, 13, ':');
  int mm = parse_digits(text, 14, 2);
  expect(text, 16, ':');
  int ss = parse_digits(text, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) throw std::invalid_argument("time of day out of range");

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw std::invalid_argument("empty fractional seconds");
  }
  if (pos >= text.size()) throw std::invalid_argument("missing UTC offset");

  seconds offset{0};
  char z = text[pos];
  if (z == 'Z' || z == 'z') {
    ++pos;
  } else if (z == '+' || z == '-') {
    int oh = parse_digits(text, pos + 1, 2);
    expect(text, pos + 3, ':');
    int om = parse_digits(text, pos + 4, 2);
    if (oh > 23 || om > 59) throw std::invalid_argument("UTC offset out of range");
    offset = hours{oh} + minutes{om};
    if (z == '-') offset = -offset;
    pos += 6;
  } else {
    throw std::invalid_argument("bad UTC offset");
  }
  if (pos != text.size()) throw std::invalid_argument("trailing characters in timestamp");

  return Timestamp{date.time_since_epoch()} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

namespace {

struct Civil {
  year_month_day ymd;
  hh_mm_ss<seconds> tod;
};

Civil split(Timestamp t) {
  auto day_start = floor<days>(t);
  return {year_month_day{day_start}, hh_mm_ss<seconds>{t - day_start}};
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
  auto [ymd, tod] = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::string format_compact(Timestamp t) {
  auto [ymd, tod] = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

bool is_monday(Date d) { return weekday{d} == Monday; }

Date week_of(Date d) { return d - days{weekday{d}.iso_encoding() - 1}; }

Date week_of(Timestamp t) { return week_of(floor<days>(t)); }

Window Window::make(Date first, Date last) {
  if (!is_monday(first)) throw WindowError("window start " + format_date(first) + " is not a Monday");
  if (!is_monday(last)) throw WindowError("window end " + format_date(last) + " is not a Monday");
  if (first > last)
    throw WindowError("window start " + format_date(first) + " is after end " + format_date(last));
  return Window{first, last};
}

Window Window::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw WindowError("window must be START:END, got '" + std::string(text) + "'");
  try {
    return make(parse_date(text.substr(0, colon)), parse_date(text.substr(colon + 1)));
  } catch (const std::invalid_argument& e) {
    throw WindowError(std::string("bad window date: ") + e.what());
  }
}

std::size_t Window::weeks() const { return static_cast<std::size_t>((last - first).count() / 7 + 1); }

Timestamp Window::end_exclusive() const { return Timestamp{(last + days{7}).time_since_epoch()}; }

std::size_t Window::index_of(Date monday) const { return static_cast<std::size_t>((monday - first).count() / 7); }

Date Window::week_at(std::size_t i) const { return first + days{7 * static_cast<long>(i)}; }

}  // namespace infodelta
