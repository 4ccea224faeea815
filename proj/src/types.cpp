#include "infodelta/types.hpp"

#include <stdexcept>

#include "infodelta/error.hpp"

namespace infodelta {

std::string_view to_string(Platform p) {
  switch (p) {
    case Platform::Facebook: return "facebook";
    case Platform::Instagram: return "instagram";
    case Platform::Other: return "other";
  }
  return "other";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Facebook: return "facebook";
    case Source::Instagram: return "instagram";
    case Source::Gdelt: return "gdelt";
    case Source::Trends: return "trends";
  }
  return "trends";
}

Platform parse_platform(std::string_view name) {
  if (name == "facebook") return Platform::Facebook;
  if (name == "instagram") return Platform::Instagram;
  if (name == "other") return Platform::Other;
  throw std::invalid_argument("unknown platform '" + std::string(name) + "'");
}

Source parse_source(std::string_view name) {
  if (name == "facebook") return Source::Facebook;
  if (name == "instagram") return Source::Instagram;
  if (name == "gdelt") return Source::Gdelt;
  if (name == "trends") return Source::Trends;
  throw std::invalid_argument("unknown source '" + std::string(name) + "'");
}

std::optional<Source> source_of(Platform p) {
  switch (p) {
    case Platform::Facebook: return Source::Facebook;
    case Platform::Instagram: return Source::Instagram;
    case Platform::Other: return std::nullopt;
  }
  return std::nullopt;
}

void require_consecutive_weeks(const std::vector<Date>& weeks) {
  for (std::size_t i = 0; i < weeks.size(); ++i) {
    if (!is_monday(weeks[i])) throw WindowError("week " + format_date(weeks[i]) + " is not a Monday");
    if (i > 0 && weeks[i] - weeks[i - 1] != std::chrono::days{7})
      throw WindowError("gap or disorder between weeks " + format_date(weeks[i - 1]) + " and " +
                        format_date(weeks[i]));
  }
}

}  // namespace infodelta
