#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "infodelta/taxonomy.hpp"
#include "infodelta/types.hpp"

namespace infodelta {

/// A post-dump row that was not loaded.
struct SkippedRow {
  enum class Reason { OutOfWindow, RowError };

  std::string file;
  std::size_t line = 0;
  Reason reason = Reason::RowError;
  std::string detail;
};

std::string_view to_string(SkippedRow::Reason r);

struct PostReadResult {
  std::vector<PostRecord> posts;
  std::vector<SkippedRow> skipped;
};

/// Column order of the post dump CSV.
inline const std::vector<std::string> kPostColumns = {"platform",          "posted_at",        "account_id",
                                                      "followers_at_post", "total_engagement", "text"};

/// Loads a post dump and keeps rows whose week lies inside `window`.
/// Unparseable rows are skipped and reported, never fatal.
/// Throws SchemaError on a wrong header, IoError if unreadable.
PostReadResult read_posts(const std::filesystem::path& path, const Window& window);

void write_posts_csv(const std::filesystem::path& path, const std::vector<PostRecord>& posts);

/// Sets each post's subtopic_id to the first subtopic (taxonomy order)
/// whose post_query matches the text, or clears it.
std::vector<PostRecord> assign_subtopics(std::vector<PostRecord> posts, const Taxonomy& taxonomy);

/// Reads a search-interest export:
///   <category line>
///   <blank line>
///   Week,<label>          (or "Settimana,<label>")
///   YYYY-MM-DD,<0..100 | "<1">
/// Dates are re-anchored to ISO-week Mondays and must then be consecutive.
/// Throws EmptyFile, FormatError, RangeError.
RawSeries read_trends_csv(const std::filesystem::path& path, const std::string& subtopic_id = {});

}  // namespace infodelta
