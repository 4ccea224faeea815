#pragma once

// Shared test helpers and brute-force oracles. Oracles here deliberately
// avoid the library's own code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infodelta/analysis.hpp"
#include "infodelta/query.hpp"

namespace testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("infodelta_test_" + std::to_string(rd()) + "_" + std::to_string(++counter));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Relative path -> bytes for every regular file under root.
inline std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.emplace_back(e.path().lexically_relative(root).generic_string(), read_file(e.path()));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// random query trees

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{"casa",  "green", "case",  "epbd", "auto", "elettrica", "città",
                                              "30",    "ztl",   "pompa", "di",   "calore", "or",      "and",
                                              "Piste", "CICLABILI", "qualità", "aria"};
  return words;
}

inline std::string random_phrase(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  std::string out;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (i) out += ' ';
    out += vocabulary()[pick(rng)];
  }
  return out;
}

inline infodelta::BooleanQuery random_query(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, 2);
  int k = depth <= 0 ? 2 : kind(rng);
  if (k == 2) return infodelta::BooleanQuery::make_phrase(random_phrase(rng));
  std::uniform_int_distribution<int> arity(2, 4);
  std::vector<infodelta::BooleanQuery> children;
  for (int i = 0, n = arity(rng); i < n; ++i) children.push_back(random_query(rng, depth - 1));
  return k == 0 ? infodelta::BooleanQuery::any_of(std::move(children))
                : infodelta::BooleanQuery::all_of(std::move(children));
}

inline std::string random_document(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  static const std::vector<std::string> seps{" ", ", ", "! ", " - ", "\n", "'"};
  std::uniform_int_distribution<std::size_t> sep(0, seps.size() - 1);
  std::string out;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (i) out += seps[sep(rng)];
    out += vocabulary()[pick(rng)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// oracles

/// Week-by-week mask, then group equal consecutive labels.
inline std::vector<infodelta::Episode> episode_oracle(const infodelta::DeltaSeries& d, const infodelta::Thresholds& th,
                                                      std::size_t min_len) {
  using infodelta::Episode;
  std::vector<int> mask(d.values.size(), 0);  // -1 void, +1 overabundance
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (d.values[i] < th.lower) mask[i] = -1;
    else if (d.values[i] > th.upper) mask[i] = 1;
  }
  std::vector<Episode> out;
  std::size_t i = 0;
  while (i < mask.size()) {
    if (mask[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < mask.size() && mask[j] == mask[i]) ++j;
    if (j - i >= min_len) {
      Episode e;
      e.kind = mask[i] < 0 ? Episode::Kind::Void : Episode::Kind::Overabundance;
      e.start_week = d.week_start[i];
      e.end_week = d.week_start[j - 1];
      e.length = j - i;
      std::vector<int> run(d.values.begin() + static_cast<long>(i), d.values.begin() + static_cast<long>(j));
      e.peak_value = mask[i] < 0 ? *std::min_element(run.begin(), run.end()) : *std::max_element(run.begin(), run.end());
      long long s = 0;
      for (int v : run) s += v;
      e.mean_value = static_cast<double>(s) / static_cast<double>(run.size());
      out.push_back(e);
    }
    i = j;
  }
  return out;
}

/// Direct per-lag Pearson in long double; nullopt where undefined.
inline std::optional<double> lag_pearson_oracle(const std::vector<double>& x, const std::vector<double>& y, int k) {
  std::vector<long double> a, b;
  for (int t = 0; t < static_cast<int>(x.size()); ++t) {
    int u = t + k;
    if (u < 0 || u >= static_cast<int>(y.size())) continue;
    a.push_back(x[static_cast<std::size_t>(t)]);
    b.push_back(y[static_cast<std::size_t>(u)]);
  }
  if (a.size() < 3) return std::nullopt;
  long double n = static_cast<long double>(a.size());
  long double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  long double ma = sa / n, mb = sb / n;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::nullopt;
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

/// Normal equations X'X b = X'y solved by Gauss-Jordan in long double.
inline std::vector<long double> normal_equations_oracle(const std::vector<std::vector<double>>& rows,
                                                        const std::vector<double>& y) {
  const std::size_t p = rows.front().size();
  std::vector<std::vector<long double>> m(p, std::vector<long double>(p + 1, 0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) m[i][j] += static_cast<long double>(rows[r][i]) * rows[r][j];
      m[i][p] += static_cast<long double>(rows[r][i]) * y[r];
    }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[best][c])) best = r;
    std::swap(m[c], m[best]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      long double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= p; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<long double> out(p);
  for (std::size_t i = 0; i < p; ++i) out[i] = m[i][p] / m[i][i];
  return out;
}

}  // namespace testing
