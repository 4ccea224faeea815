#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "infodelta/csv.hpp"
#include "infodelta/error.hpp"
#include "infodelta/json_out.hpp"
#include "infodelta/pipeline.hpp"
#include "infodelta/svg.hpp"

namespace infodelta {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kSupplyColor = "#1f77b4";
const char* kDemandColor = "#d62728";
const char* kOverColor = "#2ca02c";
const char* kVoidColor = "#d62728";

struct Frame {
  double width, height;
  double left = 56, right = 20, top = 34, bottom = 56;
  double x0() const { return left; }
  double x1() const { return width - right; }
  double y0() const { return height - bottom; }
  double y1() const { return top; }
};

void axes(svg::Document& doc, const Frame& f, const svg::Scale& y, double lo, double hi, const std::string& ylabel) {
  const svg::Stroke axis{"#333333", 1.0, ""};
  const svg::Stroke grid{"#dddddd", 0.5, ""};
  for (double t : svg::ticks(lo, hi)) {
    doc.line({f.x0(), y(t)}, {f.x1(), y(t)}, grid);
    doc.text({f.x0() - 6, y(t) + 4}, svg::tick_label(t), 10, svg::Anchor::End);
  }
  doc.line({f.x0(), f.y0()}, {f.x1(), f.y0()}, axis);
  doc.line({f.x0(), f.y0()}, {f.x0(), f.y1()}, axis);
  doc.text({14, (f.y0() + f.y1()) / 2}, ylabel, 11, svg::Anchor::Middle, -90);
}

void week_labels(svg::Document& doc, const Frame& f, const svg::Scale& x, const std::vector<std::string>& weeks) {
  if (weeks.empty()) return;
  const std::size_t step = std::max<std::size_t>(1, weeks.size() / 6);
  for (std::size_t i = 0; i < weeks.size(); i += step) {
    doc.line({x(static_cast<double>(i)), f.y0()}, {x(static_cast<double>(i)), f.y0() + 4}, {"#333333", 1.0, ""});
    doc.text({x(static_cast<double>(i)), f.y0() + 16}, weeks[i], 9, svg::Anchor::Middle);
  }
}

void legend(svg::Document& doc, double x, double y, const std::vector<std::pair<std::string, std::string>>& items) {
  for (const auto& [label, color] : items) {
    doc.rect(x, y - 8, 10, 10, color);
    doc.text({x + 14, y + 1}, label, 10);
    x += 24 + 7.0 * static_cast<double>(label.size());
  }
}

std::vector<std::string> strings(const json& a) {
  std::vector<std::string> out;
  for (const auto& e : a) out.push_back(e.get<std::string>());
  return out;
}

std::vector<double> numbers(const json& a) {
  std::vector<double> out;
  for (const auto& e : a) out.push_back(e.get<double>());
  return out;
}

std::string supply_demand_svg(const json& b) {
  const auto weeks = strings(b["week_start"]);
  const auto supply = numbers(b["supply_normalized"]);
  const auto demand = numbers(b["demand_normalized"]);
  Frame f{720, 320};
  svg::Document doc(f.width, f.height);
  svg::Scale x(0, static_cast<double>(std::max<std::size_t>(weeks.size(), 2) - 1), f.x0(), f.x1());
  svg::Scale y(0, 100, f.y0(), f.y1());
  axes(doc, f, y, 0, 100, "normalised volume (0-100)");
  week_labels(doc, f, x, weeks);
  auto line = [&](const std::vector<double>& v, const char* color) {
    std::vector<svg::Point> pts;
    for (std::size_t i = 0; i < v.size(); ++i) pts.push_back({x(static_cast<double>(i)), y(v[i])});
    doc.polyline(pts, {color, 1.5, ""});
  };
  line(demand, kDemandColor);
  line(supply, kSupplyColor);
  const std::string src = b["supply_source"].get<std::string>();
  doc.text({f.x0(), 20}, b["subtopic_id"].get<std::string>() + ": supply (" + src + ") vs demand (trends)", 13);
  legend(doc, f.x1() - 220, 20, {{"supply", kSupplyColor}, {"demand", kDemandColor}});
  return doc.str();
}

std::string delta_svg(const json& b) {
  const auto weeks = strings(b["week_start"]);
  const auto delta = numbers(b["delta"]);
  const double upper = b["thresholds"]["upper"].get<double>();
  const double lower = b["thresholds"]["lower"].get<double>();
  Frame f{720, 320};
  svg::Document doc(f.width, f.height);
  const double n = static_cast<double>(std::max<std::size_t>(weeks.size(), 1));
  svg::Scale x(0, n, f.x0(), f.x1());
  svg::Scale y(-100, 100, f.y0(), f.y1());
  axes(doc, f, y, -100, 100, "supply - demand");
  week_labels(doc, f, x, weeks);
  const double bar = (f.x1() - f.x0()) / n;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double v = delta[i];
    const double top = y(std::max(v, 0.0)), bottom = y(std::min(v, 0.0));
    const bool marked = v > upper || v < lower;
    doc.rect(x(static_cast<double>(i)) + 0.1 * bar, top, 0.8 * bar, bottom - top, v >= 0 ? kOverColor : kVoidColor,
             marked ? 1.0 : 0.45);
  }
  doc.line({f.x0(), y(0)}, {f.x1(), y(0)}, {"#333333", 1.0, ""});
  doc.line({f.x0(), y(upper)}, {f.x1(), y(upper)}, {kSupplyColor, 1.0, "5 3"});
  doc.line({f.x0(), y(lower)}, {f.x1(), y(lower)}, {kDemandColor, 1.0, "5 3"});
  doc.text({f.x1(), y(upper) - 4}, "mean supply " + fixed6(upper).substr(0, fixed6(upper).size() - 4), 9,
           svg::Anchor::End);
  doc.text({f.x1(), y(lower) + 12}, "-mean demand " + fixed6(lower).substr(0, fixed6(lower).size() - 4), 9,
           svg::Anchor::End);
  doc.text({f.x0(), 20},
           b["subtopic_id"].get<std::string>() + ": weekly delta (" + b["supply_source"].get<std::string>() + ")", 13);
  return doc.str();
}

std::string scatter_svg(const json& b) {
  const auto delta = numbers(b["delta"]);
  const auto logs = numbers(b["engagement"]["log_engagement"]);
  double ymax = 1;
  for (double v : logs) ymax = std::max(ymax, std::ceil(v));
  Frame f{480, 360};
  svg::Document doc(f.width, f.height);
  svg::Scale x(-100, 100, f.x0(), f.x1());
  svg::Scale y(0, ymax, f.y0(), f.y1());
  axes(doc, f, y, 0, ymax, "log10(1 + engagement)");
  for (double t : svg::ticks(-100, 100, 4)) {
    doc.line({x(t), f.y0()}, {x(t), f.y0() + 4}, {"#333333", 1.0, ""});
    doc.text({x(t), f.y0() + 16}, svg::tick_label(t), 9, svg::Anchor::Middle);
  }
  doc.text({(f.x0() + f.x1()) / 2, f.height - 14}, "delta (supply - demand)", 11, svg::Anchor::Middle);
  for (std::size_t i = 0; i < delta.size() && i < logs.size(); ++i)
    doc.circle({x(delta[i]), y(logs[i])}, 3, kSupplyColor, 0.6);
  const auto r = b["engagement"]["correlation"]["r"].get<double>();
  doc.text({f.x0(), 20},
           b["subtopic_id"].get<std::string>() + " (" + b["supply_source"].get<std::string>() + "), r = " + fixed6(r),
           13);
  return doc.str();
}

std::string cumulative_svg(const std::string& source, const std::vector<json>& bundles) {
  const double n = static_cast<double>(bundles.size());
  Frame f{std::max(360.0, 80 + 44 * n), 420};
  f.bottom = 150;
  double ymax = 100;
  for (const auto& b : bundles)
    ymax = std::max({ymax, b["cumulative"]["supply"].get<double>(), b["cumulative"]["demand"].get<double>()});
  auto ts = svg::ticks(0, ymax);
  if (!ts.empty() && ts.back() < ymax) ymax = ts.back() + (ts.size() > 1 ? ts[1] - ts[0] : ymax);
  svg::Document doc(f.width, f.height);
  svg::Scale x(0, n, f.x0(), f.x1());
  svg::Scale y(0, ymax, f.y0(), f.y1());
  axes(doc, f, y, 0, ymax, "cumulative normalised volume");
  const double slot = (f.x1() - f.x0()) / std::max(1.0, n);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const double base = x(static_cast<double>(i));
    const double s = bundles[i]["cumulative"]["supply"].get<double>();
    const double d = bundles[i]["cumulative"]["demand"].get<double>();
    doc.rect(base + 0.1 * slot, y(s), 0.38 * slot, f.y0() - y(s), kSupplyColor);
    doc.rect(base + 0.52 * slot, y(d), 0.38 * slot, f.y0() - y(d), kDemandColor);
    doc.text({base + 0.5 * slot, f.y0() + 10}, bundles[i]["subtopic_id"].get<std::string>(), 9, svg::Anchor::End, -60);
  }
  doc.text({f.x0(), 20}, "cumulative supply (" + source + ") vs demand", 13);
  legend(doc, f.x1() - 200, 20, {{"supply", kSupplyColor}, {"demand", kDemandColor}});
  return doc.str();
}

std::string rows_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  csv::write_row(out, header);
  for (const auto& r : rows) csv::write_row(out, r);
  return out.str();
}

std::string value_str(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fixed6(v.get<double>());
  return v.dump();
}

}  // namespace

StageResult cmd_report(const RunConfig& config) {
  config.validate();
  StageResult result;
  const fs::path out = config.resolve(config.output_dir);
  const fs::path analysis = out / "analysis";
  std::vector<fs::path> files;
  if (fs::exists(analysis))
    for (const auto& e : fs::recursive_directory_iterator(analysis))
      if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "summary.json")
        files.push_back(e.path());
  if (files.empty()) throw NothingToAnalyze("no analysis bundles under " + analysis.string() + " (run 'analyze' first)");
  std::sort(files.begin(), files.end());

  const fs::path report = out / "report";
  fs::remove_all(report);
  std::vector<std::vector<std::string>> index;
  auto emit = [&](const fs::path& relpath, const std::string& content) {
    write_text_file(report / relpath, content);
    result.written.push_back((fs::path("report") / relpath).generic_string());
  };

  std::map<std::string, std::vector<json>> by_source;
  for (const auto& path : files) {
    json b;
    try {
      b = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
      throw Error(path.string() + ": " + e.what());
    }
    const auto id = b["subtopic_id"].get<std::string>();
    const auto source = b["supply_source"].get<std::string>();
    const fs::path dir = id;
    const auto weeks = strings(b["week_start"]);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < weeks.size(); ++i)
      rows.push_back({weeks[i], value_str(b["supply_normalized"][i]), value_str(b["demand_normalized"][i])});
    emit(dir / (source + "_supply_demand.svg"), supply_demand_svg(b));
    emit(dir / (source + "_supply_demand.csv"), rows_csv({"week_start", "supply", "demand"}, rows));
    index.push_back({(dir / (source + "_supply_demand.svg")).generic_string(), "supply_demand", id, source, "written", ""});

    rows.clear();
    for (std::size_t i = 0; i < weeks.size(); ++i)
      rows.push_back({weeks[i], value_str(b["delta"][i]), value_str(b["thresholds"]["upper"]),
                      value_str(b["thresholds"]["lower"])});
    emit(dir / (source + "_delta.svg"), delta_svg(b));
    emit(dir / (source + "_delta.csv"), rows_csv({"week_start", "delta", "threshold_upper", "threshold_lower"}, rows));
    index.push_back({(dir / (source + "_delta.svg")).generic_string(), "delta", id, source, "written", ""});

    const auto scatter = (dir / (source + "_engagement.svg")).generic_string();
    if (b["engagement"].is_null()) {
      index.push_back({scatter, "engagement", id, source, "omitted", "no engagement data for this source"});
    } else if (b["engagement"]["correlation"]["r"].is_null()) {
      index.push_back({scatter, "engagement", id, source, "omitted",
                       "engagement correlation undefined (" +
                           b["engagement"]["correlation"]["undefined_reason"].get<std::string>() + ")"});
    } else {
      rows.clear();
      for (std::size_t i = 0; i < weeks.size(); ++i)
        rows.push_back({weeks[i], value_str(b["delta"][i]), value_str(b["engagement"]["log_engagement"][i])});
      emit(dir / (source + "_engagement.svg"), scatter_svg(b));
      emit(dir / (source + "_engagement.csv"), rows_csv({"week_start", "delta", "log10_engagement"}, rows));
      index.push_back({scatter, "engagement", id, source, "written", ""});
    }
    by_source[source].push_back(std::move(b));
  }

  for (const auto& [source, bundles] : by_source) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& b : bundles)
      rows.push_back({b["subtopic_id"].get<std::string>(), value_str(b["cumulative"]["supply"]),
                      value_str(b["cumulative"]["demand"]), b["cumulative"]["balance"].get<std::string>()});
    emit("cumulative_" + source + ".svg", cumulative_svg(source, bundles));
    emit("cumulative_" + source + ".csv", rows_csv({"subtopic_id", "supply", "demand", "balance"}, rows));
    index.push_back({"cumulative_" + source + ".svg", "cumulative", "", source, "written", ""});
  }

  std::sort(index.begin(), index.end());
  emit("index.csv", rows_csv({"file", "chart", "subtopic_id", "source", "status", "note"}, index));
  std::sort(result.written.begin(), result.written.end());
  return result;
}

}  // namespace infodelta
