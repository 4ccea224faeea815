#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infodelta/series.hpp"

namespace infodelta {

/// Weekly supply minus demand, each on 0..100, so values lie in [-100, 100].
struct DeltaSeries {
  std::string subtopic_id;
  Source supply_source = Source::Facebook;
  std::vector<Date> week_start;
  std::vector<int> values;
};

/// upper = mean normalised supply, lower = -(mean normalised demand).
struct Thresholds {
  double upper = 0.0;
  double lower = 0.0;
};

struct Episode {
  enum class Kind { Void, Overabundance };

  Kind kind = Kind::Void;
  Date start_week;
  Date end_week;  // inclusive
  std::size_t length = 0;
  int peak_value = 0;  // most extreme delta: minimum for voids, maximum otherwise
  double mean_value = 0.0;

  friend bool operator==(const Episode&, const Episode&) = default;
};

std::string_view to_string(Episode::Kind k);

/// A correlation that may be undefined. Undefined is never reported as 0.
struct Correlation {
  enum class Undefined { None, ShortOverlap, ZeroVariance };

  std::optional<double> value;
  Undefined reason = Undefined::None;

  bool defined() const { return value.has_value(); }
};

std::string_view to_string(Correlation::Undefined u);

/// Pearson correlation; undefined for fewer than 3 pairs or a constant input.
/// Throws AlignmentError on length mismatch.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Lagged Pearson correlation. r(k) correlates pairs (x[t], y[t+k]) over the
/// overlap, so a positive k means y lags x by k weeks.
struct LagCorrelation {
  std::vector<int> lags;           // -max_lag..max_lag
  std::vector<Correlation> r;      // one per lag
  std::optional<int> peak_lag;     // absent when no r is defined
  std::optional<double> peak_r;

  const Correlation& at(int lag) const;
};

/// Throws AlignmentError (length mismatch),
/// TooShort (n < 3), std::invalid_argument (max_lag < 0 or max_lag >= n).
/// Peak: largest defined r; values within 1e-12 of it tie, resolved to the
/// smallest |lag|, then the negative lag.
LagCorrelation cross_correlation(std::span<const double> x, std::span<const double> y, int max_lag);

/// Throws AlignmentError when the weeks differ.
DeltaSeries delta(const NormalizedSeries& supply, const NormalizedSeries& demand);
Thresholds thresholds(const NormalizedSeries& supply, const NormalizedSeries& demand);

/// Maximal runs of weeks strictly above th.upper (overabundance) or strictly
/// below th.lower (void) with at least min_len weeks, ordered by start week.
std::vector<Episode> detect_episodes(const DeltaSeries& delta, const Thresholds& th, std::size_t min_len = 1);

/// Pearson correlation of delta against log10(1 + weekly engagement).
Correlation engagement_correlation(const DeltaSeries& delta, const EngagementSeries& engagement);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct OlsResult {
  std::vector<double> coefficients;
  std::optional<double> r_squared;  // absent when y is constant
};

/// Least squares via the normal equations on unit-norm scaled columns.
/// Throws RankDeficient when the smallest elimination pivot falls below
/// 1e-10 of the largest, std::invalid_argument on shape errors.
OlsResult ols_fit(std::span<const double> y, const Matrix& x);

}  // namespace infodelta
