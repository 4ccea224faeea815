#include "infodelta/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include <json.hpp>

#include "infodelta/analysis.hpp"
#include "infodelta/csv.hpp"
#include "infodelta/error.hpp"
#include "infodelta/gdelt.hpp"
#include "infodelta/hash.hpp"
#include "infodelta/ingest.hpp"
#include "infodelta/json_out.hpp"
#include "infodelta/series.hpp"
#include "infodelta/taxonomy.hpp"

namespace infodelta {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kLagConvention =
    "r(k) correlates supply[t] with demand[t+k]; positive k means demand lags supply by k weeks";

const std::vector<Source> kSupplyOrder{Source::Facebook, Source::Instagram, Source::Gdelt};

bool wants(const RunConfig& c, Source s) {
  return std::find(c.sources.begin(), c.sources.end(), s) != c.sources.end();
}

std::string display(const RunConfig& c, const fs::path& p) {
  return p.lexically_proximate(c.base_dir).generic_string();
}

std::string rel(const fs::path& root, const fs::path& p) { return p.lexically_relative(root).generic_string(); }

std::string get_string(const json& doc, const char* key, const std::string& ctx) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) throw ConfigError(ctx + ": '" + key + "' must be a string");
  return it->get<std::string>();
}

json week_strings(const std::vector<Date>& weeks) {
  json out = json::array();
  for (auto w : weeks) out.push_back(format_date(w));
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------
// configuration

fs::path RunConfig::resolve(const fs::path& p) const { return p.is_absolute() ? p : base_dir / p; }

void RunConfig::validate() const {
  try {
    Window::make(window.first, window.last);
  } catch (const WindowError& e) {
    throw ConfigError(e.what());
  }
  if (max_lag < 1) throw ConfigError("max_lag must be at least 1");
  if (min_episode_len < 1) throw ConfigError("min_episode_len must be at least 1");
  if (sources.empty()) throw ConfigError("no supply sources selected");
  for (auto s : sources)
    if (s == Source::Trends) throw ConfigError("'trends' is the demand source, not a supply source");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (taxonomy.empty()) throw ConfigError("taxonomy is required");
}

std::vector<Source> parse_sources(std::string_view list) {
  std::vector<Source> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      auto s = parse_source(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RunConfig load_run_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": not valid JSON: " + e.what());
  }
  const std::string ctx = path.string();
  if (!doc.is_object()) throw ConfigError(ctx + ": must be a JSON object");
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion)
    throw ConfigError(ctx + ": schema_version must be " + std::to_string(kSchemaVersion));

  RunConfig c;
  c.base_dir = fs::absolute(path).parent_path();
  c.taxonomy = get_string(doc, "taxonomy", ctx);
  c.output_dir = get_string(doc, "output_dir", ctx);

  auto window = doc.find("window");
  if (window == doc.end() || !window->is_object()) throw ConfigError(ctx + ": 'window' must be an object");
  try {
    c.window = Window::make(parse_date(get_string(*window, "start", ctx + " window")),
                            parse_date(get_string(*window, "end", ctx + " window")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + ": window: " + e.what());
  } catch (const WindowError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }

  if (auto posts = doc.find("posts"); posts != doc.end()) {
    if (!posts->is_array()) throw ConfigError(ctx + ": 'posts' must be an array of paths");
    for (const auto& p : *posts) {
      if (!p.is_string()) throw ConfigError(ctx + ": 'posts' entries must be strings");
      c.posts.emplace_back(p.get<std::string>());
    }
  }
  if (doc.contains("trends_dir")) c.trends_dir = fs::path(get_string(doc, "trends_dir", ctx));

  if (auto g = doc.find("gdelt"); g != doc.end()) {
    if (!g->is_object()) throw ConfigError(ctx + ": 'gdelt' must be an object");
    auto mode = g->value("mode", std::string("fixture"));
    if (mode == "fixture")
      c.gdelt.mode = GdeltConfig::Mode::Fixture;
    else if (mode == "live")
      c.gdelt.mode = GdeltConfig::Mode::Live;
    else
      throw ConfigError(ctx + ": gdelt.mode must be 'fixture' or 'live'");
    if (g->contains("fixture_dir")) c.gdelt.fixture_dir = get_string(*g, "fixture_dir", ctx + " gdelt");
    if (g->contains("country")) c.gdelt.country = get_string(*g, "country", ctx + " gdelt");
    if (g->contains("endpoint")) c.gdelt.endpoint = get_string(*g, "endpoint", ctx + " gdelt");
    if (g->contains("record")) {
      if (!(*g)["record"].is_boolean()) throw ConfigError(ctx + ": gdelt.record must be a boolean");
      c.gdelt.record = (*g)["record"].get<bool>();
    }
  }

  if (auto v = doc.find("max_lag"); v != doc.end()) {
    if (!v->is_number_integer()) throw ConfigError(ctx + ": max_lag must be an integer");
    c.max_lag = v->get<int>();
  }
  if (auto v = doc.find("min_episode_len"); v != doc.end()) {
    if (!v->is_number_integer() || v->get<long long>() < 1)
      throw ConfigError(ctx + ": min_episode_len must be a positive integer");
    c.min_episode_len = v->get<std::size_t>();
  }
  if (auto v = doc.find("sources"); v != doc.end()) {
    if (!v->is_array()) throw ConfigError(ctx + ": sources must be an array");
    std::string joined;
    for (const auto& s : *v) {
      if (!s.is_string()) throw ConfigError(ctx + ": sources entries must be strings");
      joined += (joined.empty() ? "" : ",") + s.get<std::string>();
    }
    c.sources = parse_sources(joined);
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// ingest

StageResult cmd_ingest(const RunConfig& config) {
  config.validate();
  StageResult result;
  const fs::path out = config.resolve(config.output_dir);
  const Taxonomy taxonomy = load_taxonomy(config.resolve(config.taxonomy));

  fs::create_directories(out);
  fs::remove_all(out / "raw");
  fs::remove_all(out / "posts");

  json inputs = json::array();
  inputs.push_back({{"kind", "taxonomy"},
                    {"path", display(config, config.resolve(config.taxonomy))},
                    {"sha256", sha256_file(config.resolve(config.taxonomy))}});

  // posts
  const bool want_posts = wants(config, Source::Facebook) || wants(config, Source::Instagram);
  std::vector<PostRecord> posts;
  std::vector<SkippedRow> skipped;
  if (want_posts) {
    if (config.posts.empty()) result.warnings.push_back("no post dumps configured");
    for (const auto& p : config.posts) {
      const auto path = config.resolve(p);
      auto loaded = read_posts(path, config.window);
      for (auto& s : loaded.skipped) s.file = display(config, path);
      skipped.insert(skipped.end(), loaded.skipped.begin(), loaded.skipped.end());
      posts.insert(posts.end(), std::make_move_iterator(loaded.posts.begin()),
                   std::make_move_iterator(loaded.posts.end()));
      inputs.push_back({{"kind", "posts"}, {"path", display(config, path)}, {"sha256", sha256_file(path)}});
    }
    posts = assign_subtopics(std::move(posts), taxonomy);
  }
  {
    std::ofstream report(out / "skip_report.csv", std::ios::binary | std::ios::trunc);
    if (!report) throw IoError("cannot write " + (out / "skip_report.csv").string());
    csv::write_row(report, {"file", "line", "reason", "detail"});
    for (const auto& s : skipped)
      csv::write_row(report, {s.file, std::to_string(s.line), std::string(to_string(s.reason)), s.detail});
  }
  if (!skipped.empty()) {
    std::size_t errors = std::count_if(skipped.begin(), skipped.end(), [](const SkippedRow& s) {
      return s.reason == SkippedRow::Reason::RowError;
    });
    if (errors > 0) result.warnings.push_back(std::to_string(errors) + " malformed post rows skipped (see skip_report.csv)");
  }

  // news transport
  std::unique_ptr<gdelt::Transport> transport;
  if (wants(config, Source::Gdelt)) {
    if (config.gdelt.mode == GdeltConfig::Mode::Fixture) {
      transport = std::make_unique<gdelt::FixtureTransport>(config.resolve(config.gdelt.fixture_dir));
    } else {
      gdelt::LiveOptions options;
      if (config.gdelt.record) options.record_dir = config.resolve(config.gdelt.fixture_dir);
      transport = std::make_unique<gdelt::LiveTransport>(options);
    }
  }

  json subtopics = json::array();
  std::size_t assigned = 0;
  for (const auto* sub : taxonomy.subtopics()) {
    const fs::path dir = out / "raw" / sub->id;
    json files = json::array();
    json missing = json::array();

    std::vector<PostRecord> mine;
    for (const auto& p : posts)
      if (p.subtopic_id == sub->id) mine.push_back(p);
    assigned += mine.size();

    for (auto platform : {Platform::Facebook, Platform::Instagram}) {
      const Source source = *source_of(platform);
      if (!wants(config, source)) continue;
      auto [counts, engagement] = aggregate_weekly(mine, sub->id, platform, config.window);
      write_series_csv(dir / (std::string(to_string(source)) + ".csv"), counts);
      write_engagement_csv(dir / ("engagement_" + std::string(to_string(source)) + ".csv"), engagement);
      files.push_back(rel(out, dir / (std::string(to_string(source)) + ".csv")));
      files.push_back(rel(out, dir / ("engagement_" + std::string(to_string(source)) + ".csv")));
    }
    if (want_posts) {
      write_posts_csv(out / "posts" / (sub->id + ".csv"), mine);
      files.push_back(rel(out, out / "posts" / (sub->id + ".csv")));
    }

    if (transport) {
      const auto url = gdelt::timeline_url(config.gdelt.endpoint, sub->news_query, config.gdelt.country, config.window);
      try {
        auto series = gdelt::fetch_timeline(sub->news_query, config.gdelt.country, config.window, *transport, sub->id,
                                            config.gdelt.endpoint);
        write_series_csv(dir / "gdelt.csv", series);
        files.push_back(rel(out, dir / "gdelt.csv"));
        if (config.gdelt.mode == GdeltConfig::Mode::Fixture) {
          auto fixture = config.resolve(config.gdelt.fixture_dir) / gdelt::fixture_name(url);
          inputs.push_back({{"kind", "gdelt_fixture"},
                            {"subtopic_id", sub->id},
                            {"path", display(config, fixture)},
                            {"sha256", sha256_file(fixture)}});
        } else {
          inputs.push_back({{"kind", "gdelt_live"}, {"subtopic_id", sub->id}, {"url", url}});
        }
      } catch (const gdelt::FixtureMissing&) {
        missing.push_back("gdelt");
        result.warnings.push_back(sub->id + ": no recorded news timeline (" + gdelt::fixture_name(url) + ")");
      } catch (const Error& e) {
        throw Error(sub->id + ": news timeline: " + e.what());
      }
    }

    bool have_trends = false;
    if (config.trends_dir) {
      const auto path = config.resolve(*config.trends_dir) / (sub->id + ".csv");
      if (fs::exists(path)) {
        RawSeries demand;
        try {
          demand = read_trends_csv(path, sub->id);
        } catch (const Error& e) {
          throw Error(display(config, path) + ": " + e.what());
        }
        RawSeries clipped;
        clipped.subtopic_id = sub->id;
        clipped.source = Source::Trends;
        for (std::size_t i = 0; i < demand.week_start.size(); ++i) {
          if (!config.window.contains_week(demand.week_start[i])) continue;
          clipped.week_start.push_back(demand.week_start[i]);
          clipped.values.push_back(demand.values[i]);
        }
        if (clipped.values.empty()) {
          result.warnings.push_back(sub->id + ": search-interest export does not overlap the window");
        } else {
          if (clipped.values.size() != config.window.weeks())
            result.warnings.push_back(sub->id + ": search-interest export covers " +
                                      std::to_string(clipped.values.size()) + " of " +
                                      std::to_string(config.window.weeks()) + " weeks");
          write_series_csv(dir / "trends.csv", clipped);
          files.push_back(rel(out, dir / "trends.csv"));
          have_trends = true;
        }
        inputs.push_back({{"kind", "trends"}, {"subtopic_id", sub->id}, {"path", display(config, path)},
                          {"sha256", sha256_file(path)}});
      }
    }
    if (!have_trends) {
      missing.push_back("trends");
      result.warnings.push_back(sub->id + ": no search-interest export; subtopic incomplete");
    }

    std::sort(files.begin(), files.end());
    for (const auto& f : files) result.written.push_back(f.get<std::string>());
    subtopics.push_back({{"id", sub->id},
                         {"name", sub->name},
                         {"topic", sub->topic},
                         {"status", missing.empty() ? "complete" : "incomplete"},
                         {"missing", missing},
                         {"files", files}});
  }

  json sources = json::array();
  for (auto s : kSupplyOrder)
    if (wants(config, s)) sources.push_back(to_string(s));

  json manifest = {{"schema_version", kSchemaVersion},
                   {"tool", "infodelta"},
                   {"version", kVersion},
                   {"stage", "ingest"},
                   {"window", {{"start", format_date(config.window.first)}, {"end", format_date(config.window.last)}}},
                   {"sources", sources},
                   {"inputs", inputs},
                   {"posts", {{"loaded", posts.size()}, {"assigned", assigned}, {"skipped", skipped.size()}}},
                   {"subtopics", subtopics},
                   {"warnings", result.warnings}};
  write_text_file(out / "manifest.json", dump_fixed(manifest));
  result.written.push_back("manifest.json");
  result.written.push_back("skip_report.csv");
  std::sort(result.written.begin(), result.written.end());
  return result;
}

// ---------------------------------------------------------------------------
// analyze

namespace {

EngagementSeries restrict_weeks(const EngagementSeries& e, const std::vector<Date>& weeks) {
  EngagementSeries out;
  out.subtopic_id = e.subtopic_id;
  out.platform = e.platform;
  for (auto w : weeks) {
    auto it = std::find(e.week_start.begin(), e.week_start.end(), w);
    if (it == e.week_start.end()) throw AlignmentError("engagement series lacks week " + format_date(w));
    auto i = static_cast<std::size_t>(it - e.week_start.begin());
    out.week_start.push_back(w);
    out.engagement_sum.push_back(e.engagement_sum[i]);
    out.post_count.push_back(e.post_count[i]);
  }
  return out;
}

json correlation_json(const Correlation& c) {
  return {{"r", optional_number(c.value)}, {"undefined_reason", to_string(c.reason)}};
}

json ols_json(const std::vector<PostRecord>& posts, Platform platform, const DeltaSeries& d) {
  std::vector<const PostRecord*> rows;
  std::vector<int> delta_of;
  for (const auto& p : posts) {
    if (p.platform != platform) continue;
    auto week = week_of(p.posted_at);
    auto it = std::find(d.week_start.begin(), d.week_start.end(), week);
    if (it == d.week_start.end()) continue;
    rows.push_back(&p);
    delta_of.push_back(d.values[static_cast<std::size_t>(it - d.week_start.begin())]);
  }
  json out = {{"model", "log10(1+engagement) ~ 1 + delta + log10(1+followers_at_post), pooled over posts"},
              {"predictors", {"intercept", "delta", "log10_followers"}},
              {"n", rows.size()}};
  if (rows.size() < 4) {
    out["error"] = "too few posts";
    return out;
  }
  Matrix x(rows.size(), 3);
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = delta_of[i];
    x(i, 2) = std::log10(1.0 + static_cast<double>(rows[i]->followers_at_post));
    y[i] = std::log10(1.0 + static_cast<double>(rows[i]->total_engagement));
  }
  try {
    auto fit = ols_fit(y, x);
    out["coefficients"] = fit.coefficients;
    out["r_squared"] = optional_number(fit.r_squared);
  } catch (const RankDeficient& e) {
    out["error"] = e.what();
  }
  return out;
}

struct BundleSummary {
  std::string subtopic_id;
  Source source;
  std::size_t weeks = 0;
  std::int64_t cum_supply = 0;
  std::int64_t cum_demand = 0;
  Balance balance = Balance::Equal;
  Thresholds th;
  std::size_t voids = 0;
  std::size_t overabundance = 0;
  std::optional<double> lag0_r;
  std::optional<int> peak_lag;
  std::optional<double> peak_r;
  std::optional<double> engagement_r;
  std::optional<double> followers_coef;
};

json analyze_pair(const RunConfig& config, const fs::path& out, const std::string& id, Source source,
                  const NormalizedSeries& demand_full, BundleSummary& summary) {
  const fs::path raw = out / "raw" / id;
  const auto supply_full = rescale(read_series_csv(raw / (std::string(to_string(source)) + ".csv")));
  const auto aligned = align(supply_full, demand_full);

  NormalizedSeries supply{id, source, aligned.week_start, aligned.a, supply_full.degenerate};
  NormalizedSeries demand{id, Source::Trends, aligned.week_start, aligned.b, demand_full.degenerate};

  const auto d = delta(supply, demand);
  const auto th = thresholds(supply, demand);
  const auto episodes = detect_episodes(d, th, config.min_episode_len);

  std::vector<double> xs(supply.values.begin(), supply.values.end());
  std::vector<double> ys(demand.values.begin(), demand.values.end());
  const int n = static_cast<int>(xs.size());
  const int max_lag = std::min(config.max_lag, std::max(0, n - 3));
  const auto lag = cross_correlation(xs, ys, max_lag);

  json bundle;
  bundle["schema_version"] = kSchemaVersion;
  bundle["subtopic_id"] = id;
  bundle["supply_source"] = to_string(source);
  bundle["demand_source"] = "trends";
  bundle["week_start"] = week_strings(aligned.week_start);
  bundle["supply_normalized"] = supply.values;
  bundle["supply_degenerate"] = supply.degenerate;
  bundle["demand_normalized"] = demand.values;
  bundle["delta"] = d.values;
  bundle["thresholds"] = {{"upper", th.upper}, {"lower", th.lower}};

  json eps = json::array();
  for (const auto& e : episodes)
    eps.push_back({{"kind", to_string(e.kind)},
                   {"start_week", format_date(e.start_week)},
                   {"end_week", format_date(e.end_week)},
                   {"length", e.length},
                   {"peak_value", e.peak_value},
                   {"mean_value", e.mean_value}});
  bundle["episodes"] = eps;
  bundle["min_episode_len"] = config.min_episode_len;

  json rs = json::array(), reasons = json::array();
  for (const auto& c : lag.r) {
    rs.push_back(optional_number(c.value));
    reasons.push_back(to_string(c.reason));
  }
  const auto& lag0 = lag.at(0);
  bundle["lag_correlation"] = {{"convention", kLagConvention},
                               {"max_lag", max_lag},
                               {"lags", lag.lags},
                               {"r", rs},
                               {"undefined_reason", reasons},
                               {"lag0_r", optional_number(lag0.value)},
                               {"peak_lag", lag.peak_lag ? json(*lag.peak_lag) : json(nullptr)},
                               {"peak_r", optional_number(lag.peak_r)}};

  const auto cum_s = cumulative(supply), cum_d = cumulative(demand);
  const auto balance = compare_cumulative(supply, demand);
  bundle["cumulative"] = {{"supply", cum_s}, {"demand", cum_d}, {"balance", to_string(balance)}};

  summary = {id, source, aligned.week_start.size(), cum_s, cum_d, balance, th, 0, 0, lag0.value, lag.peak_lag,
             lag.peak_r, std::nullopt, std::nullopt};
  for (const auto& e : episodes) (e.kind == Episode::Kind::Void ? summary.voids : summary.overabundance)++;

  if (source == Source::Gdelt) {
    bundle["engagement"] = nullptr;
    bundle["ols"] = nullptr;
  } else {
    const auto platform = parse_platform(to_string(source));
    auto eng = restrict_weeks(read_engagement_csv(raw / ("engagement_" + std::string(to_string(source)) + ".csv")),
                              aligned.week_start);
    auto corr = engagement_correlation(d, eng);
    json logs = json::array();
    for (auto e : eng.engagement_sum) logs.push_back(std::log10(1.0 + static_cast<double>(e)));
    bundle["engagement"] = {{"transform", "log10(1+x)"},
                            {"engagement_sum", eng.engagement_sum},
                            {"post_count", eng.post_count},
                            {"log_engagement", logs},
                            {"correlation", correlation_json(corr)}};
    summary.engagement_r = corr.value;

    const auto posts_path = out / "posts" / (id + ".csv");
    std::vector<PostRecord> posts;
    if (fs::exists(posts_path)) posts = read_posts(posts_path, config.window).posts;
    bundle["ols"] = ols_json(posts, platform, d);
    if (bundle["ols"].contains("coefficients")) summary.followers_coef = bundle["ols"]["coefficients"][2].get<double>();
  }
  return bundle;
}

std::string opt6(const std::optional<double>& v) { return v ? fixed6(*v) : ""; }

int modal_lag(const std::vector<int>& lags) {
  std::map<int, int> counts;
  for (int l : lags) ++counts[l];
  int best = 0, best_count = -1;
  for (auto [lag, count] : counts) {
    bool better = count > best_count ||
                  (count == best_count && (std::abs(lag) < std::abs(best) || (std::abs(lag) == std::abs(best) && lag < best)));
    if (better) {
      best = lag;
      best_count = count;
    }
  }
  return best;
}

json aggregate(const std::vector<const BundleSummary*>& rows) {
  double lag0 = 0, peak = 0, eng = 0;
  std::size_t n_lag0 = 0, n_peak = 0, n_eng = 0;
  std::vector<int> peaks;
  std::map<std::string, int> balance;
  for (const auto* r : rows) {
    if (r->lag0_r) lag0 += *r->lag0_r, ++n_lag0;
    if (r->peak_r) peak += *r->peak_r, ++n_peak;
    if (r->peak_lag) peaks.push_back(*r->peak_lag);
    if (r->engagement_r) eng += *r->engagement_r, ++n_eng;
    ++balance[std::string(to_string(r->balance))];
  }
  auto mean_or_null = [](double s, std::size_t n) { return n ? json(s / static_cast<double>(n)) : json(nullptr); };
  return {{"bundles", rows.size()},
          {"mean_lag0_r", mean_or_null(lag0, n_lag0)},
          {"mean_peak_r", mean_or_null(peak, n_peak)},
          {"modal_peak_lag", peaks.empty() ? json(nullptr) : json(modal_lag(peaks))},
          {"mean_engagement_r", mean_or_null(eng, n_eng)},
          {"balance_counts", balance}};
}

}  // namespace

StageResult cmd_analyze(const RunConfig& config) {
  config.validate();
  StageResult result;
  const fs::path out = config.resolve(config.output_dir);
  const fs::path manifest_path = out / "manifest.json";
  if (!fs::exists(manifest_path) || !fs::exists(out / "raw"))
    throw NothingToAnalyze("no ingested series under " + out.string() + " (run 'ingest' first)");
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw Error("corrupt manifest: " + std::string(e.what()));
  }

  fs::remove_all(out / "analysis");
  std::vector<BundleSummary> rows;
  json failures = json::array();
  json skipped = json::array();

  for (const auto& entry : manifest.at("subtopics")) {
    const auto id = entry.at("id").get<std::string>();
    const fs::path raw = out / "raw" / id;
    if (!fs::exists(raw / "trends.csv")) {
      skipped.push_back({{"subtopic_id", id}, {"reason", "no demand series"}});
      continue;
    }
    NormalizedSeries demand;
    try {
      demand = as_normalized(read_series_csv(raw / "trends.csv"));
    } catch (const std::exception& e) {
      failures.push_back({{"subtopic_id", id}, {"source", "trends"}, {"error", e.what()}});
      result.warnings.push_back(id + ": " + e.what());
      continue;
    }
    for (auto source : kSupplyOrder) {
      if (!wants(config, source)) continue;
      if (!fs::exists(raw / (std::string(to_string(source)) + ".csv"))) {
        skipped.push_back({{"subtopic_id", id}, {"source", to_string(source)}, {"reason", "no supply series"}});
        continue;
      }
      try {
        BundleSummary summary;
        auto bundle = analyze_pair(config, out, id, source, demand, summary);
        const auto file = fs::path("analysis") / id / (std::string(to_string(source)) + ".json");
        write_text_file(out / file, dump_fixed(bundle));
        result.written.push_back(file.generic_string());
        rows.push_back(summary);
      } catch (const std::exception& e) {
        failures.push_back({{"subtopic_id", id}, {"source", to_string(source)}, {"error", e.what()}});
        result.warnings.push_back(id + "/" + std::string(to_string(source)) + ": " + e.what());
      }
    }
  }
  if (rows.empty()) throw NothingToAnalyze("no (subtopic, source) pair could be analysed");

  {
    std::ofstream csv_out(out / "analysis" / "summary.csv", std::ios::binary | std::ios::trunc);
    csv::write_row(csv_out, {"subtopic_id", "source", "weeks", "cumulative_supply", "cumulative_demand", "balance",
                             "threshold_upper", "threshold_lower", "void_episodes", "overabundance_episodes",
                             "lag0_r", "peak_lag", "peak_r", "engagement_r", "ols_log_followers_coef"});
    for (const auto& r : rows)
      csv::write_row(csv_out, {r.subtopic_id, std::string(to_string(r.source)), std::to_string(r.weeks),
                               std::to_string(r.cum_supply), std::to_string(r.cum_demand),
                               std::string(to_string(r.balance)), fixed6(r.th.upper), fixed6(r.th.lower),
                               std::to_string(r.voids), std::to_string(r.overabundance), opt6(r.lag0_r),
                               r.peak_lag ? std::to_string(*r.peak_lag) : "", opt6(r.peak_r), opt6(r.engagement_r),
                               opt6(r.followers_coef)});
  }

  json by_source = json::object();
  std::vector<const BundleSummary*> all;
  for (const auto& r : rows) all.push_back(&r);
  for (auto source : kSupplyOrder) {
    std::vector<const BundleSummary*> subset;
    for (const auto& r : rows)
      if (r.source == source) subset.push_back(&r);
    if (!subset.empty()) by_source[std::string(to_string(source))] = aggregate(subset);
  }
  json summary = {{"schema_version", kSchemaVersion},
                  {"lag_convention", kLagConvention},
                  {"overall", aggregate(all)},
                  {"by_source", by_source},
                  {"failures", failures},
                  {"skipped", skipped}};
  write_text_file(out / "analysis" / "summary.json", dump_fixed(summary));
  result.written.push_back("analysis/summary.csv");
  result.written.push_back("analysis/summary.json");
  std::sort(result.written.begin(), result.written.end());
  return result;
}

}  // namespace infodelta
