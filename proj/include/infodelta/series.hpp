#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "infodelta/types.hpp"

namespace infodelta {

/// Weekly values rescaled onto 0..100, where 100 is the window maximum.
struct NormalizedSeries {
  std::string subtopic_id;
  Source source = Source::Trends;
  std::vector<Date> week_start;
  std::vector<int> values;
  bool degenerate = false;  // raw series was all zero
};

struct EngagementSeries {
  std::string subtopic_id;
  Platform platform = Platform::Other;
  std::vector<Date> week_start;
  std::vector<std::int64_t> engagement_sum;
  std::vector<std::int64_t> post_count;
};

/// Weekly post counts and engagement sums for one subtopic and platform.
/// Only posts with the given subtopic_id and platform inside the window
/// contribute; every week of the window is present.
std::pair<RawSeries, EngagementSeries> aggregate_weekly(const std::vector<PostRecord>& posts,
                                                         const std::string& subtopic_id, Platform platform,
                                                         const Window& window);

/// round-half-up(100 * s / max(s)). All-zero input yields zeros and sets
/// `degenerate`. Throws std::invalid_argument on negative values.
NormalizedSeries rescale(const RawSeries& series);

/// Demand already on the 0..100 scale is passed through unchanged.
/// Throws std::invalid_argument when a value is outside 0..100.
NormalizedSeries as_normalized(const RawSeries& series);

struct AlignedPair {
  std::vector<Date> week_start;
  std::vector<int> a;
  std::vector<int> b;
};

/// Restricts both series to their common weeks. Throws NoOverlap.
AlignedPair align(const NormalizedSeries& a, const NormalizedSeries& b);

std::int64_t cumulative(const NormalizedSeries& series);

enum class Balance { DemandExceedsSupply, SupplyExceedsDemand, Equal };
std::string_view to_string(Balance b);
Balance compare_cumulative(const NormalizedSeries& supply, const NormalizedSeries& demand);

// CSV form: subtopic_id,source,week_start,value
void write_series_csv(const std::filesystem::path& path, const RawSeries& series);
void write_series_csv(const std::filesystem::path& path, const NormalizedSeries& series);
RawSeries read_series_csv(const std::filesystem::path& path);

// CSV form: subtopic_id,source,week_start,engagement_sum,post_count
void write_engagement_csv(const std::filesystem::path& path, const EngagementSeries& series);
EngagementSeries read_engagement_csv(const std::filesystem::path& path);

}  // namespace infodelta
