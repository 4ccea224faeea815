// infodelta: information supply/demand analytics.
//
//   infodelta ingest|analyze|report|run --config <path> [overrides]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "infodelta/error.hpp"
#include "infodelta/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> window;
  std::optional<int> max_lag;
  std::optional<int> min_episode_len;
  std::optional<std::string> sources;
  std::optional<std::string> output;
};

infodelta::RunConfig build_config(const Overrides& o) {
  auto config = infodelta::load_run_config(o.config);
  try {
    if (o.window) config.window = infodelta::Window::parse(*o.window);
  } catch (const infodelta::WindowError& e) {
    throw infodelta::ConfigError(e.what());
  }
  if (o.max_lag) config.max_lag = *o.max_lag;
  if (o.min_episode_len) {
    if (*o.min_episode_len < 1) throw infodelta::ConfigError("--min-episode-len must be at least 1");
    config.min_episode_len = static_cast<std::size_t>(*o.min_episode_len);
  }
  if (o.sources) config.sources = infodelta::parse_sources(*o.sources);
  if (o.output) config.output_dir = std::filesystem::absolute(*o.output);
  config.validate();
  return config;
}

void report(const char* stage, const infodelta::StageResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << stage << ": wrote " << r.written.size() << " files\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information supply and demand analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(infodelta::kVersion));

  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration (JSON)")->required();
    sub->add_option("--window", o.window, "Analysis window START:END (Mondays, YYYY-MM-DD)");
    sub->add_option("--max-lag", o.max_lag, "Largest cross-correlation lag in weeks");
    sub->add_option("--min-episode-len", o.min_episode_len, "Shortest reported void/overabundance run");
    sub->add_option("--sources", o.sources, "Supply sources, e.g. facebook,instagram,gdelt");
    sub->add_option("--output", o.output, "Output directory (overrides the config)");
  };
  auto* ingest = app.add_subcommand("ingest", "Read posts, search-interest exports and news timelines");
  auto* analyze = app.add_subcommand("analyze", "Compute deltas, episodes, correlations and engagement stats");
  auto* report_cmd = app.add_subcommand("report", "Render SVG charts and CSV tables");
  auto* run = app.add_subcommand("run", "ingest, analyze and report in sequence");
  for (auto* sub : {ingest, analyze, report_cmd, run}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = build_config(o);
    if (ingest->parsed() || run->parsed()) report("ingest", infodelta::cmd_ingest(config));
    if (analyze->parsed() || run->parsed()) report("analyze", infodelta::cmd_analyze(config));
    if (report_cmd->parsed() || run->parsed()) report("report", infodelta::cmd_report(config));
  } catch (const infodelta::ConfigError& e) {
    std::cerr << "ConfigError: " << e.what() << '\n';
    return 2;
  } catch (const infodelta::NothingToAnalyze& e) {
    std::cerr << "NothingToAnalyze: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
