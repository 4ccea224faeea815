#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "infodelta/analysis.hpp"
#include "infodelta/error.hpp"
#include "support.hpp"

using namespace infodelta;

namespace {

std::vector<Date> weeks(std::size_t n, const char* first = "2022-12-26") {
  std::vector<Date> out;
  Date d = parse_date(first);
  for (std::size_t i = 0; i < n; ++i) out.push_back(d + std::chrono::days{7 * i});
  return out;
}

NormalizedSeries norm(std::vector<int> values, Source source = Source::Facebook) {
  NormalizedSeries s;
  s.subtopic_id = "s";
  s.source = source;
  s.week_start = weeks(values.size());
  s.values = std::move(values);
  return s;
}

DeltaSeries make_delta(std::vector<int> values) {
  DeltaSeries d;
  d.subtopic_id = "s";
  d.week_start = weeks(values.size());
  d.values = std::move(values);
  return d;
}

std::vector<double> varying_signal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = g(rng);
  return out;
}

}  // namespace

TEST_CASE("delta examples") {
  CHECK(delta(norm({50}), norm({70}, Source::Trends)).values == std::vector<int>{-20});
  CHECK(delta(norm({3, 9, 40}), norm({3, 9, 40}, Source::Trends)).values == std::vector<int>{0, 0, 0});
  CHECK(delta(norm({100}), norm({0}, Source::Trends)).values == std::vector<int>{100});
  auto d = delta(norm({1, 2}, Source::Gdelt), norm({0, 0}, Source::Trends));
  CHECK(d.supply_source == Source::Gdelt);

  auto shifted = norm({1, 2});
  shifted.week_start = weeks(2, "2023-01-02");
  CHECK_THROWS_AS(delta(shifted, norm({1, 2}, Source::Trends)), AlignmentError);
  CHECK_THROWS_AS(thresholds(shifted, norm({1, 2}, Source::Trends)), AlignmentError);
}

TEST_CASE("thresholds examples") {
  auto t = thresholds(norm({30, 30}), norm({45, 45}, Source::Trends));
  CHECK(t.upper == 30.0);
  CHECK(t.lower == -45.0);
  t = thresholds(norm({0, 0, 0}), norm({10, 0, 5}, Source::Trends));
  CHECK(t.upper == 0.0);
  t = thresholds(norm({10, 20, 30}), norm({0, 0, 0}, Source::Trends));
  CHECK(t.upper == 20.0);
  CHECK(t.lower == 0.0);
}

TEST_CASE("episode examples") {
  auto d = make_delta({-50, -50, 10});
  auto e = detect_episodes(d, {30.0, -40.0});
  REQUIRE(e.size() == 1);
  CHECK(e[0].kind == Episode::Kind::Void);
  CHECK(e[0].start_week == d.week_start[0]);
  CHECK(e[0].end_week == d.week_start[1]);
  CHECK(e[0].length == 2);
  CHECK(e[0].peak_value == -50);
  CHECK(e[0].mean_value == -50.0);

  CHECK(detect_episodes(make_delta({0, 0, 0, 0}), {0.0, 0.0}).empty());

  e = detect_episodes(make_delta({35}), {30.0, -40.0});
  REQUIRE(e.size() == 1);
  CHECK(e[0].kind == Episode::Kind::Overabundance);
  CHECK(e[0].length == 1);

  // strict inequalities; min_len filters short runs
  CHECK(detect_episodes(make_delta({30, -40}), {30.0, -40.0}).empty());
  e = detect_episodes(make_delta({50, 50, 0, 60, -90, -90, -90}), {20.0, -30.0}, 3);
  REQUIRE(e.size() == 1);
  CHECK(e[0].kind == Episode::Kind::Void);
  CHECK(e[0].length == 3);
  CHECK_THROWS_AS(detect_episodes(make_delta({1}), {0.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("episodes match the mask-and-group oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> v(-100, 100), len(0, 120), ml(1, 4);
  std::uniform_real_distribution<double> th(0.0, 60.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<int> vals(static_cast<std::size_t>(len(rng)));
    for (auto& x : vals) x = v(rng);
    auto d = make_delta(vals);
    Thresholds t{th(rng), -th(rng)};
    auto min_len = static_cast<std::size_t>(ml(rng));
    CHECK(detect_episodes(d, t, min_len) == testing::episode_oracle(d, t, min_len));
  }
}

TEST_CASE("pearson") {
  std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, c{5, 5, 5, 5};
  CHECK(*pearson(x, y).value == doctest::Approx(1.0));
  CHECK(pearson(x, c).reason == Correlation::Undefined::ZeroVariance);
  std::vector<double> two{1, 2};
  CHECK(pearson(two, two).reason == Correlation::Undefined::ShortOverlap);
  CHECK_THROWS_AS(pearson(x, two), AlignmentError);
}

TEST_CASE("cross-correlation examples") {
  std::mt19937_64 rng(4);
  auto x = varying_signal(86, rng);
  auto same = cross_correlation(x, x, 8);
  CHECK(*same.at(0).value == doctest::Approx(1.0));
  CHECK(same.peak_lag == 0);

  // y delayed by 3 weeks: y[t] = x[t-3]
  std::vector<double> y(86);
  for (std::size_t t = 0; t < 86; ++t) y[t] = x[(t + 86 - 3) % 86];
  auto lagged = cross_correlation(x, y, 8);
  CHECK(lagged.peak_lag == 3);
  CHECK(*lagged.peak_r == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(*cross_correlation(x, neg, 2).at(0).value == doctest::Approx(-1.0));

  std::vector<double> two{1, 2};
  CHECK_THROWS_AS(cross_correlation(two, two, 0), TooShort);
  CHECK_THROWS_AS(cross_correlation(x, std::vector<double>(85, 1.0), 1), AlignmentError);
  CHECK_THROWS_AS(cross_correlation(x, x, 86), std::invalid_argument);
  CHECK_THROWS_AS(cross_correlation(x, x, -1), std::invalid_argument);
}

TEST_CASE("cross-correlation agrees with a per-lag oracle") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(3, 40);
  for (int i = 0; i < 200; ++i) {
    auto n = static_cast<std::size_t>(len(rng));
    auto x = varying_signal(n, rng), y = varying_signal(n, rng);
    if (i % 10 == 0) std::fill(y.begin(), y.begin() + static_cast<long>(n / 2), 1.0);
    int max_lag = std::min<int>(static_cast<int>(n) - 1, 8);
    auto lc = cross_correlation(x, y, max_lag);
    REQUIRE(lc.lags.size() == static_cast<std::size_t>(2 * max_lag + 1));
    std::optional<double> top;
    for (int k = -max_lag; k <= max_lag; ++k) {
      auto expected = testing::lag_pearson_oracle(x, y, k);
      const auto& got = lc.at(k);
      REQUIRE(got.defined() == expected.has_value());
      if (!expected) continue;
      CHECK(*got.value == doctest::Approx(*expected).epsilon(1e-9));
      if (!top || *expected > *top) top = *expected;
    }
    // preference order: 0, -1, +1, -2, +2, ...
    std::optional<int> best;
    for (int m = 0; m <= max_lag && !best; ++m)
      for (int k : {-m, m}) {
        auto r = testing::lag_pearson_oracle(x, y, k);
        if (!best && r && *r >= *top - 1e-12) best = k;
      }
    double best_r = best ? *testing::lag_pearson_oracle(x, y, *best) : 0.0;
    CHECK(lc.peak_lag.has_value() == best.has_value());
    if (best) {
      CHECK(lc.peak_lag == best);
      CHECK(*lc.peak_r == doctest::Approx(best_r).epsilon(1e-9));
    }
  }
}

TEST_CASE("peak ties prefer the smallest lag magnitude, then the negative lag") {
  // period-4 signal: r is exactly 1 at lags 0, +-4, +-8
  std::vector<double> x(40);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = static_cast<double>(t % 4);
  auto lc = cross_correlation(x, x, 8);
  CHECK(lc.peak_lag == 0);

  // shift by 2: r is 1 at lags -2 and +2
  std::vector<double> y(40);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = static_cast<double>((t + 2) % 4);
  lc = cross_correlation(x, y, 3);
  CHECK(*lc.at(2).value == doctest::Approx(1.0));
  CHECK(*lc.at(-2).value == doctest::Approx(1.0));
  CHECK(lc.peak_lag == -2);
}

TEST_CASE("undefined lags are flagged, never zero") {
  std::vector<double> x{1, 2, 3, 4, 5}, c{3, 3, 3, 3, 3};
  auto lc = cross_correlation(x, x, 4);
  CHECK(lc.at(3).reason == Correlation::Undefined::ShortOverlap);
  CHECK_FALSE(lc.at(3).defined());
  auto flat = cross_correlation(x, c, 1);
  CHECK_FALSE(flat.peak_lag.has_value());
  CHECK(flat.at(0).reason == Correlation::Undefined::ZeroVariance);
}

TEST_CASE("engagement correlation") {
  std::mt19937_64 rng(86);
  std::uniform_int_distribution<int> v(-40, 40);
  std::vector<int> dv(86);
  for (auto& x : dv) x = v(rng);
  auto d = make_delta(dv);

  EngagementSeries e;
  e.week_start = d.week_start;
  e.post_count.assign(86, 1);
  for (int x : dv) e.engagement_sum.push_back(std::llround(std::pow(10.0, 0.05 * x + 2) - 1));
  // rounding to integer counts costs a little exactness
  CHECK(*engagement_correlation(d, e).value > 0.9999);

  auto flat = make_delta(std::vector<int>(86, 7));
  CHECK(engagement_correlation(flat, e).reason == Correlation::Undefined::ZeroVariance);

  std::uniform_int_distribution<std::int64_t> eng(0, 100000);
  int within = 0;
  for (int trial = 0; trial < 50; ++trial) {
    for (auto& x : dv) x = v(rng);
    for (auto& x : e.engagement_sum) x = eng(rng);
    auto r = engagement_correlation(make_delta(dv), e);
    if (std::fabs(*r.value) < 0.3) ++within;
  }
  CHECK(within == 50);

  e.week_start = weeks(86, "2023-01-02");
  CHECK_THROWS_AS(engagement_correlation(d, e), AlignmentError);
}

TEST_CASE("ols exact fits") {
  Matrix x(5, 2);
  std::vector<double> y;
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = 1;
    x(i, 1) = static_cast<double>(i) * 1.5 - 2;
    y.push_back(3 + 2 * x(i, 1));
  }
  auto fit = ols_fit(y, x);
  CHECK(std::fabs(fit.coefficients[0] - 3) < 1e-9);
  CHECK(std::fabs(fit.coefficients[1] - 2) < 1e-9);
  CHECK(*fit.r_squared == doctest::Approx(1.0));

  Matrix x3(6, 3);
  std::vector<double> y3;
  double x1[] = {1, 4, 2, 8, 5, 7}, x2[] = {3, 1, 4, 1, 5, 9};
  for (std::size_t i = 0; i < 6; ++i) {
    x3(i, 0) = 1;
    x3(i, 1) = x1[i];
    x3(i, 2) = x2[i];
    y3.push_back(1 * x1[i] + 0 * x2[i] + 5);
  }
  fit = ols_fit(y3, x3);
  CHECK(std::fabs(fit.coefficients[0] - 5) < 1e-9);
  CHECK(std::fabs(fit.coefficients[1] - 1) < 1e-9);
  CHECK(std::fabs(fit.coefficients[2]) < 1e-9);
}

TEST_CASE("ols matches a high-precision normal-equations solve") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 60, p = 4;
    Matrix x(n, p);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) rows[i][j] = x(i, j) = j == 0 ? 1.0 : g(rng) * (j * 10.0);
      y[i] = 2 * rows[i][1] - rows[i][3] + g(rng);
    }
    auto fit = ols_fit(y, x);
    auto oracle = testing::normal_equations_oracle(rows, y);
    for (std::size_t j = 0; j < p; ++j)
      CHECK(fit.coefficients[j] == doctest::Approx(static_cast<double>(oracle[j])).epsilon(1e-9));

    // residuals are orthogonal to every column
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double yhat = 0;
        for (std::size_t k = 0; k < p; ++k) yhat += x(i, k) * fit.coefficients[k];
        s += x(i, j) * (y[i] - yhat);
      }
      CHECK(std::fabs(s) < 1e-8);
    }
    CHECK(*fit.r_squared >= 0.0);
    CHECK(*fit.r_squared <= 1.0);
  }
}

TEST_CASE("ols rank deficiency and shape errors") {
  Matrix x(5, 3);
  std::vector<double> y{1, 2, 3, 5, 8};
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = 1;
    x(i, 1) = static_cast<double>(i * i);
    x(i, 2) = static_cast<double>(i * i);
  }
  CHECK_THROWS_AS(ols_fit(y, x), RankDeficient);

  Matrix zero(5, 2);
  for (std::size_t i = 0; i < 5; ++i) zero(i, 0) = 1;
  CHECK_THROWS_AS(ols_fit(y, zero), RankDeficient);

  CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, x), std::invalid_argument);

  Matrix line(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    line(i, 0) = 1;
    line(i, 1) = static_cast<double>(i);
  }
  auto flat = ols_fit(std::vector<double>{2, 2, 2, 2}, line);
  CHECK_FALSE(flat.r_squared.has_value());
  CHECK(std::fabs(flat.coefficients[0] - 2) < 1e-12);
}
