#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace infodelta {

/// Calendar date (days since the Unix epoch).
using Date = std::chrono::sys_days;

/// UTC timestamp at second precision.
using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
Date parse_date(std::string_view text);

/// Parses an RFC 3339 timestamp ("2023-01-01T10:00:00Z", "...+02:00",
/// optional fractional seconds, which are truncated).
Timestamp parse_rfc3339(std::string_view text);

std::string format_date(Date d);
std::string format_rfc3339(Timestamp t);

/// GDELT compact form "YYYYMMDDHHMMSS".
std::string format_compact(Timestamp t);

bool is_monday(Date d);

/// Monday of the ISO week containing the timestamp.
Date week_of(Timestamp t);
Date week_of(Date d);

/// Inclusive range of ISO weeks, each bound is a Monday.
struct Window {
  Date first;
  Date last;

  /// Throws WindowError unless first <= last and both are Mondays.
  static Window make(Date first, Date last);

  /// Parses "YYYY-MM-DD:YYYY-MM-DD".
  static Window parse(std::string_view text);

  std::size_t weeks() const;
  bool contains_week(Date monday) const { return monday >= first && monday <= last; }
  bool contains(Timestamp t) const { return contains_week(week_of(t)); }

  /// First instant after the window (Monday following `last`).
  Timestamp end_exclusive() const;

  /// Index of the week containing `monday`, assuming contains_week(monday).
  std::size_t index_of(Date monday) const;
  Date week_at(std::size_t i) const;

  friend bool operator==(const Window&, const Window&) = default;
};

}  // namespace infodelta
