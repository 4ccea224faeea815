#include "infodelta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "infodelta/error.hpp"

namespace infodelta {

std::string_view to_string(Episode::Kind k) { return k == Episode::Kind::Void ? "void" : "overabundance"; }

std::string_view to_string(Correlation::Undefined u) {
  switch (u) {
    case Correlation::Undefined::None: return "none";
    case Correlation::Undefined::ShortOverlap: return "short_overlap";
    case Correlation::Undefined::ZeroVariance: return "zero_variance";
  }
  return "none";
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw AlignmentError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) return {std::nullopt, Correlation::Undefined::ShortOverlap};
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) return {std::nullopt, Correlation::Undefined::ZeroVariance};

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return {std::nullopt, Correlation::Undefined::ZeroVariance};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), Correlation::Undefined::None};
}

const Correlation& LagCorrelation::at(int lag) const {
  auto it = std::find(lags.begin(), lags.end(), lag);
  if (it == lags.end()) throw std::out_of_range("lag " + std::to_string(lag) + " not computed");
  return r[static_cast<std::size_t>(it - lags.begin())];
}

LagCorrelation cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag) {
  if (x.size() != y.size()) throw AlignmentError("cross_correlation: length mismatch");
  const auto n = static_cast<int>(x.size());
  if (n < 3) throw TooShort("cross_correlation needs at least 3 points, got " + std::to_string(n));
  if (max_lag < 0 || max_lag >= n)
    throw std::invalid_argument("max_lag must be in [0, " + std::to_string(n - 1) + "]");

  LagCorrelation out;
  for (int k = -max_lag; k <= max_lag; ++k) {
    out.lags.push_back(k);
    const int begin = std::max(0, -k);
    const int end = std::min(n, n - k);
    const auto len = static_cast<std::size_t>(end - begin);
    out.r.push_back(pearson(x.subspan(static_cast<std::size_t>(begin), len),
                            y.subspan(static_cast<std::size_t>(begin + k), len)));
  }

  // r values within kTieTolerance of the maximum count as ties; rounding
  // noise must not decide between lags carrying the same correlation
  constexpr double kTieTolerance = 1e-12;
  std::optional<double> best;
  for (const auto& r : out.r)
    if (r.defined() && (!best || *r.value > *best)) best = r.value;
  if (!best) return out;
  for (std::size_t i = 0; i < out.lags.size(); ++i) {
    if (!out.r[i].defined() || *out.r[i].value < *best - kTieTolerance) continue;
    const int lag = out.lags[i];
    bool better = !out.peak_lag;
    if (!better) {
      const int cur = *out.peak_lag;
      better = std::abs(lag) < std::abs(cur) || (std::abs(lag) == std::abs(cur) && lag < cur);
    }
    if (better) {
      out.peak_lag = lag;
      out.peak_r = *out.r[i].value;
    }
  }
  return out;
}

namespace {

void require_same_weeks(const std::vector<Date>& a, const std::vector<Date>& b, const char* what) {
  if (a != b) throw AlignmentError(std::string(what) + ": series cover different weeks");
}

double mean(const std::vector<int>& v) {
  if (v.empty()) return 0.0;
  long long sum = 0;
  for (int e : v) sum += e;
  return static_cast<double>(sum) / static_cast<double>(v.size());
}

}  // namespace

DeltaSeries delta(const NormalizedSeries& supply, const NormalizedSeries& demand) {
  require_same_weeks(supply.week_start, demand.week_start, "delta");
  DeltaSeries out;
  out.subtopic_id = supply.subtopic_id;
  out.supply_source = supply.source;
  out.week_start = supply.week_start;
  out.values.reserve(supply.values.size());
  for (std::size_t i = 0; i < supply.values.size(); ++i) out.values.push_back(supply.values[i] - demand.values[i]);
  return out;
}

Thresholds thresholds(const NormalizedSeries& supply, const NormalizedSeries& demand) {
  require_same_weeks(supply.week_start, demand.week_start, "thresholds");
  return {mean(supply.values), -mean(demand.values)};
}

std::vector<Episode> detect_episodes(const DeltaSeries& delta, const Thresholds& th, std::size_t min_len) {
  if (min_len < 1) throw std::invalid_argument("min_len must be at least 1");
  std::vector<Episode> out;
  const auto& v = delta.values;

  for (auto kind : {Episode::Kind::Void, Episode::Kind::Overabundance}) {
    auto qualifies = [&](int d) {
      return kind == Episode::Kind::Void ? d < th.lower : d > th.upper;
    };
    std::size_t i = 0;
    while (i < v.size()) {
      if (!qualifies(v[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      long long sum = 0;
      int peak = v[i];
      while (j < v.size() && qualifies(v[j])) {
        sum += v[j];
        peak = kind == Episode::Kind::Void ? std::min(peak, v[j]) : std::max(peak, v[j]);
        ++j;
      }
      const std::size_t len = j - i;
      if (len >= min_len)
        out.push_back({kind, delta.week_start[i], delta.week_start[j - 1], len, peak,
                       static_cast<double>(sum) / static_cast<double>(len)});
      i = j;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Episode& a, const Episode& b) {
    return a.start_week < b.start_week;
  });
  return out;
}

Correlation engagement_correlation(const DeltaSeries& delta, const EngagementSeries& engagement) {
  require_same_weeks(delta.week_start, engagement.week_start, "engagement_correlation");
  std::vector<double> x(delta.values.begin(), delta.values.end());
  std::vector<double> y;
  y.reserve(engagement.engagement_sum.size());
  for (auto e : engagement.engagement_sum) y.push_back(std::log10(1.0 + static_cast<double>(e)));
  return pearson(x, y);
}

namespace {

// Gaussian elimination with partial pivoting; the solution replaces b.
// Returns the absolute pivots (stops early at an exact zero).
std::vector<double> solve_in_place(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t p = a.size();
  std::vector<double> pivots;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    std::swap(a[col], a[best]);
    std::swap(b[col], b[best]);
    const double pivot = a[col][col];
    pivots.push_back(std::abs(pivot));
    if (pivot == 0.0) return pivots;
    for (std::size_t r = col + 1; r < p; ++r) {
      const double f = a[r][col] / pivot;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < p; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = p; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < p; ++c) s -= a[i][c] * b[c];
    b[i] = s / a[i][i];
  }
  return pivots;
}

}  // namespace

OlsResult ols_fit(std::span<const double> y, const Matrix& x) {
  const std::size_t n = x.rows(), p = x.cols();
  if (p == 0) throw std::invalid_argument("ols_fit: design matrix has no columns");
  if (y.size() != n) throw std::invalid_argument("ols_fit: rows(X) != length(y)");
  if (n < p) throw std::invalid_argument("ols_fit: fewer observations than predictors");

  std::vector<double> scale(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t r = 0; r < n; ++r) scale[c] += x(r, c) * x(r, c);
    scale[c] = std::sqrt(scale[c]);
    if (scale[c] == 0.0) throw RankDeficient("ols_fit: column " + std::to_string(c) + " is all zero");
  }
  auto z = [&](std::size_t r, std::size_t c) { return x(r, c) / scale[c]; };

  std::vector<std::vector<double>> gram(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      double s = 0;
      for (std::size_t r = 0; r < n; ++r) s += z(r, i) * z(r, j);
      gram[i][j] = gram[j][i] = s;
    }
  auto rhs_for = [&](const std::vector<double>& beta_scaled) {
    std::vector<double> resid(n);
    for (std::size_t r = 0; r < n; ++r) {
      double fit = 0;
      for (std::size_t c = 0; c < p; ++c) fit += z(r, c) * beta_scaled[c];
      resid[r] = y[r] - fit;
    }
    std::vector<double> rhs(p, 0.0);
    for (std::size_t c = 0; c < p; ++c)
      for (std::size_t r = 0; r < n; ++r) rhs[c] += z(r, c) * resid[r];
    return rhs;
  };

  std::vector<double> beta(p, 0.0);
  auto a = gram;
  auto b = rhs_for(beta);
  auto pivots = solve_in_place(a, b);
  const double largest = *std::max_element(pivots.begin(), pivots.end());
  const double smallest = *std::min_element(pivots.begin(), pivots.end());
  if (pivots.size() < p || smallest < 1e-10 * largest)
    throw RankDeficient("ols_fit: design matrix is numerically rank deficient");
  beta = b;

  // one step of iterative refinement
  a = gram;
  b = rhs_for(beta);
  solve_in_place(a, b);
  for (std::size_t c = 0; c < p; ++c) beta[c] += b[c];

  OlsResult out;
  for (std::size_t c = 0; c < p; ++c) out.coefficients.push_back(beta[c] / scale[c]);

  double ybar = 0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(n);
  double sst = 0, sse = 0;
  for (std::size_t r = 0; r < n; ++r) {
    double fit = 0;
    for (std::size_t c = 0; c < p; ++c) fit += x(r, c) * out.coefficients[c];
    sse += (y[r] - fit) * (y[r] - fit);
    sst += (y[r] - ybar) * (y[r] - ybar);
  }
  if (sst > 0) out.r_squared = 1.0 - sse / sst;
  return out;
}

}  // namespace infodelta
