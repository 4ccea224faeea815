#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infodelta/dates.hpp"

namespace infodelta {

enum class Platform { Facebook, Instagram, Other };

/// Origin of a weekly series. Trends is demand; the rest are supply.
enum class Source { Facebook, Instagram, Gdelt, Trends };

std::string_view to_string(Platform p);
std::string_view to_string(Source s);
/// Throw std::invalid_argument on unknown names.
Platform parse_platform(std::string_view name);
Source parse_source(std::string_view name);

/// Source matching a post platform; nullopt for Platform::Other.
std::optional<Source> source_of(Platform p);

struct PostRecord {
  Platform platform = Platform::Other;
  Timestamp posted_at;
  std::string account_id;
  std::int64_t followers_at_post = 0;
  std::int64_t total_engagement = 0;
  std::string text;
  std::optional<std::string> subtopic_id;
};

/// Weekly values over consecutive Mondays.
struct RawSeries {
  std::string subtopic_id;
  Source source = Source::Trends;
  std::vector<Date> week_start;
  std::vector<std::int64_t> values;
};

/// Throws WindowError unless the dates are consecutive Mondays.
void require_consecutive_weeks(const std::vector<Date>& weeks);

}  // namespace infodelta
