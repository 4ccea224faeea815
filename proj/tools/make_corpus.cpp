// Regenerates the bundled synthetic corpus:
//
//   make_corpus <taxonomy.json> <output_dir>
//
// Writes posts.csv, trends/<id>.csv, gdelt/<fixture>.json and run.json.
// Supply and demand share a weekly latent factor (contemporaneous coupling,
// target r ~ 0.35). Fifteen subtopics get a flat, high demand curve and a
// spiky supply curve; the three "supply-dominant" subtopics get the reverse,
// so their cumulative normalised supply exceeds demand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infodelta/csv.hpp"
#include "infodelta/dates.hpp"
#include "infodelta/gdelt.hpp"
#include "infodelta/ingest.hpp"
#include "infodelta/json_out.hpp"
#include "infodelta/taxonomy.hpp"

namespace fs = std::filesystem;
using namespace infodelta;

namespace {

constexpr std::uint64_t kSeed = 20221226;
constexpr double kCoupling = 0.385;  // latent correlation; ~0.35 after the log-normal map
const std::set<std::string> kSupplyDominant{"buildings_energetic_requalification", "mobility_cycle_lane",
                                            "work_green_deal"};

// std distributions are implementation-defined; these are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (spare_) {
      double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0;
    while (u1 <= 0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * M_PI * u2);
    return r * std::cos(2 * M_PI * u2);
  }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::vector<double> coupled(Rng& rng, const std::vector<double>& common) {
  std::vector<double> out;
  for (double c : common) out.push_back(std::sqrt(kCoupling) * c + std::sqrt(1 - kCoupling) * rng.normal());
  return out;
}

std::vector<std::int64_t> spiky_counts(const std::vector<double>& latent, double median) {
  std::vector<std::int64_t> out;
  for (double l : latent) out.push_back(std::llround(median * std::exp(0.6 * l)));
  return out;
}

std::vector<std::int64_t> flat_counts(const std::vector<double>& latent, double mean) {
  std::vector<std::int64_t> out;
  for (double l : latent) out.push_back(std::max<std::int64_t>(0, std::llround(mean * (1 + 0.2 * l))));
  return out;
}

const std::vector<std::string> kFiller{"oggi",     "notizia",  "importante", "secondo",  "esperti",   "Roma",
                                       "Milano",   "Torino",   "governo",    "cittadini", "nuovo",    "progetto",
                                       "dibattito", "settimana", "aggiornamento", "comune", "regione", "famiglie",
                                       "incentivi", "bando",   "intervista", "dati",     "analisi",  "futuro"};

std::string filler(Rng& rng, int words) {
  std::string out;
  for (int i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += kFiller[rng.below(kFiller.size())];
  }
  return out;
}

std::vector<std::string> phrases_of(const BooleanQuery& q) {
  if (q.is_phrase()) return {q.phrase};
  std::vector<std::string> out;
  for (const auto& c : q.children) {
    auto sub = phrases_of(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string post_text(Rng& rng, const std::string& phrase) {
  std::string kw = phrase;
  if (rng.uniform() < 0.2) std::transform(kw.begin(), kw.end(), kw.begin(), [](unsigned char c) {
      return static_cast<char>(std::toupper(c));
    });
  switch (rng.below(4)) {
    case 0: return filler(rng, 3) + " " + kw + ", " + filler(rng, 4);
    case 1: return kw + ": " + filler(rng, 6) + "!";
    case 2: return "\"" + filler(rng, 2) + "\" sulla " + kw + " " + filler(rng, 3);
    default: return filler(rng, 5) + " #" + filler(rng, 1) + " " + kw;
  }
}

struct Account {
  std::string id;
  std::int64_t followers;
};

std::vector<Account> accounts(Rng& rng, const std::string& prefix, int n) {
  std::vector<Account> out;
  for (int i = 0; i < n; ++i) {
    double log_f = 3.0 + 3.3 * rng.uniform();  // 1e3 .. 2e6
    char id[32];
    std::snprintf(id, sizeof id, "%s%04d", prefix.c_str(), i);
    out.push_back({id, std::llround(std::pow(10.0, log_f))});
  }
  return out;
}

std::int64_t engagement(Rng& rng, std::int64_t followers) {
  return std::llround(std::pow(static_cast<double>(followers), 0.55) * std::exp(rng.normal()));
}

struct Row {
  Timestamp at;
  std::vector<std::string> fields;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: make_corpus <taxonomy.json> <output_dir>\n";
    return 2;
  }
  const auto taxonomy = load_taxonomy(argv[1]);
  const fs::path out = argv[2];
  const auto window = Window::make(parse_date("2022-12-26"), parse_date("2024-08-12"));
  const std::size_t weeks = window.weeks();

  fs::remove_all(out / "trends");
  fs::remove_all(out / "gdelt");
  fs::create_directories(out / "trends");
  fs::create_directories(out / "gdelt");

  Rng people(kSeed);
  const auto fb_accounts = accounts(people, "fb_", 400);
  const auto ig_accounts = accounts(people, "ig_", 250);

  std::vector<Row> rows;
  std::size_t index = 0;
  for (const auto* sub : taxonomy.subtopics()) {
    Rng rng(kSeed + 1000 * ++index);
    const bool supply_dominant = kSupplyDominant.count(sub->id) > 0;
    std::vector<double> common;
    for (std::size_t t = 0; t < weeks; ++t) common.push_back(rng.normal());

    // demand
    auto latent_d = coupled(rng, common);
    std::vector<double> raw_d;
    for (double l : latent_d) raw_d.push_back(supply_dominant ? std::exp(0.6 * l) : std::max(0.0, 60 + 12 * l));
    const double max_d = *std::max_element(raw_d.begin(), raw_d.end());
    {
      std::ofstream f(out / "trends" / (sub->id + ".csv"), std::ios::binary);
      const bool italian = index % 2 == 0;
      f << (italian ? "Categoria: Tutte le categorie\n\nSettimana," : "Category: All categories\n\nWeek,")
        << csv::escape(sub->trends_spec + (italian ? ": (Italia)" : ": (Italy)")) << '\n';
      for (std::size_t t = 0; t < weeks; ++t) {
        const double scaled = 100.0 * raw_d[t] / max_d;
        const auto v = static_cast<long long>(std::floor(scaled + 0.5));
        f << format_date(window.week_at(t)) << ',' << (v == 0 && scaled > 0 ? std::string("<1") : std::to_string(v))
          << '\n';
      }
    }

    // posts
    const auto phrases = phrases_of(sub->post_query);
    for (auto platform : {Platform::Facebook, Platform::Instagram}) {
      const bool fb = platform == Platform::Facebook;
      auto latent = coupled(rng, common);
      auto counts = supply_dominant ? flat_counts(latent, fb ? 16 : 8) : spiky_counts(latent, fb ? 8 : 5);
      const auto& pool = fb ? fb_accounts : ig_accounts;
      for (std::size_t t = 0; t < weeks; ++t) {
        for (std::int64_t k = 0; k < counts[t]; ++k) {
          const auto& account = pool[rng.below(pool.size())];
          Timestamp at{window.week_at(t).time_since_epoch() + std::chrono::seconds(rng.below(7 * 86400))};
          const auto followers = account.followers + static_cast<std::int64_t>(rng.below(1000));
          rows.push_back({at,
                          {std::string(to_string(platform)), format_rfc3339(at), account.id, std::to_string(followers),
                           std::to_string(engagement(rng, followers)),
                           post_text(rng, phrases[rng.below(phrases.size())])}});
        }
      }
    }

    // news
    auto latent_g = coupled(rng, common);
    auto weekly = supply_dominant ? flat_counts(latent_g, 24) : spiky_counts(latent_g, 12);
    nlohmann::json data = nlohmann::json::array();
    std::vector<std::int64_t> daily(weeks * 7, 0);
    for (std::size_t t = 0; t < weeks; ++t)
      for (std::int64_t k = 0; k < weekly[t]; ++k) ++daily[t * 7 + rng.below(7)];
    for (std::size_t d = 0; d < daily.size(); ++d) {
      auto day = window.first + std::chrono::days{static_cast<long>(d)};
      std::string date = format_compact(Timestamp{day.time_since_epoch()});
      data.push_back({{"date", date.substr(0, 8) + "T" + date.substr(8) + "Z"},
                      {"value", daily[d]},
                      {"norm", 180000 + static_cast<std::int64_t>(rng.below(40000))}});
    }
    nlohmann::json body = {
        {"query_details", {{"title", render_gdelt(sub->news_query) + " sourcecountry:IT"}, {"date_resolution", "day"}}},
        {"timeline", {{{"series", "Article Count"}, {"data", data}}}}};
    const auto url = gdelt::timeline_url(gdelt::kDefaultEndpoint, sub->news_query, "IT", window);
    write_text_file(out / "gdelt" / gdelt::fixture_name(url), body.dump() + "\n");
  }

  // unmatched chatter, out-of-window rows and malformed rows
  Rng noise(kSeed - 1);
  for (int i = 0; i < 300; ++i) {
    const auto& account = fb_accounts[noise.below(fb_accounts.size())];
    Timestamp at{window.first.time_since_epoch() + std::chrono::seconds(noise.below(weeks * 7 * 86400))};
    rows.push_back({at,
                    {"facebook", format_rfc3339(at), account.id, std::to_string(account.followers),
                     std::to_string(engagement(noise, account.followers)), filler(noise, 8)}});
  }
  const auto early = parse_rfc3339("2022-12-20T10:00:00Z");
  const auto late = parse_rfc3339("2024-08-19T08:30:00Z");
  rows.push_back({early, {"facebook", format_rfc3339(early), "fb_0001", "1200", "4", "anticipazioni sulla casa green"}});
  rows.push_back({late, {"instagram", format_rfc3339(late), "ig_0002", "88000", "310", "pista ciclabile inaugurata"}});
  rows.push_back({late, {"facebook", "2023-13-01T00:00:00Z", "fb_0003", "500", "2", "data non valida, pompa di calore"}});
  rows.push_back({late, {"facebook", "2023-03-01T00:00:00Z", "fb_0004", "500", "-5", "engagement negativo: ZTL"}});

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.at < b.at; });
  {
    std::ofstream f(out / "posts.csv", std::ios::binary);
    csv::write_row(f, kPostColumns);
    for (const auto& r : rows) csv::write_row(f, r.fields);
  }

  nlohmann::json run = {{"schema_version", 1},
                        {"taxonomy", "../taxonomy.json"},
                        {"window", {{"start", "2022-12-26"}, {"end", "2024-08-12"}}},
                        {"posts", {"posts.csv"}},
                        {"trends_dir", "trends"},
                        {"gdelt", {{"mode", "fixture"}, {"fixture_dir", "gdelt"}, {"country", "IT"}}},
                        {"output_dir", "../../out"},
                        {"max_lag", 8},
                        {"min_episode_len", 1},
                        {"sources", {"facebook", "instagram", "gdelt"}}};
  write_text_file(out / "run.json", run.dump(2) + "\n");
  std::cout << "wrote " << rows.size() << " post rows for " << taxonomy.size() << " subtopics to " << out << '\n';
  return 0;
}
