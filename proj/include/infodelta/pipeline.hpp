#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "infodelta/dates.hpp"
#include "infodelta/types.hpp"

namespace infodelta {

inline constexpr const char* kVersion = "0.1.0";

struct GdeltConfig {
  enum class Mode { Fixture, Live };

  Mode mode = Mode::Fixture;
  std::filesystem::path fixture_dir;  // replay source, or recording target in live mode
  std::string country = "IT";
  std::string endpoint = "https://api.gdeltproject.org/api/v2/doc/doc";
  bool record = false;  // live mode: save responses into fixture_dir
};

struct RunConfig {
  std::filesystem::path base_dir;  // relative paths below are resolved against this
  std::filesystem::path taxonomy;
  Window window;
  std::vector<std::filesystem::path> posts;
  std::optional<std::filesystem::path> trends_dir;  // holds <subtopic_id>.csv
  GdeltConfig gdelt;
  std::filesystem::path output_dir;
  int max_lag = 8;
  std::size_t min_episode_len = 1;
  std::vector<Source> sources{Source::Facebook, Source::Instagram, Source::Gdelt};  // supply sources

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  /// Throws ConfigError on invalid field values.
  void validate() const;
};

/// Reads a JSON run configuration; relative paths are resolved against the
/// config file's directory. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses "facebook,instagram,gdelt". Throws ConfigError.
std::vector<Source> parse_sources(std::string_view list);

struct StageResult {
  std::vector<std::string> warnings;
  std::vector<std::string> written;  // output-relative paths, sorted
};

/// Loads and assigns posts, reads trends exports, fetches news timelines and
/// writes raw/<id>/<source>.csv, raw/<id>/engagement_<platform>.csv,
/// posts/<id>.csv, skip_report.csv and manifest.json under output_dir.
/// Missing per-subtopic inputs mark the subtopic incomplete (warning only).
StageResult cmd_ingest(const RunConfig& config);

/// Writes analysis/<id>/<source>.json bundles plus analysis/summary.{csv,json}.
/// A failing subtopic is reported and skipped. Throws NothingToAnalyze when
/// no ingested series exist.
StageResult cmd_analyze(const RunConfig& config);

/// Writes SVG charts with CSV twins under report/ plus report/index.csv.
/// Throws NothingToAnalyze when no analysis bundles exist.
StageResult cmd_report(const RunConfig& config);

}  // namespace infodelta
