#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace infodelta::svg {

struct Point {
  double x = 0;
  double y = 0;
};

struct Stroke {
  std::string color = "black";
  double width = 1.0;
  std::string dash;  // e.g. "4 2"; empty for solid
};

enum class Anchor { Start, Middle, End };

/// Minimal static SVG writer. Coordinates are printed with two decimals so
/// output bytes are stable across platforms.
class Document {
 public:
  Document(double width, double height);

  void line(Point a, Point b, const Stroke& stroke);
  void polyline(const std::vector<Point>& points, const Stroke& stroke);
  void rect(double x, double y, double w, double h, std::string_view fill, double opacity = 1.0);
  void circle(Point c, double r, std::string_view fill, double opacity = 1.0);
  void text(Point at, std::string_view content, double size = 11, Anchor anchor = Anchor::Start,
            double rotate = 0.0);

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string escape(std::string_view text);
std::string num(double v);
/// Integral values without decimals, otherwise one decimal.
std::string tick_label(double v);

/// Linear map from a data interval onto a pixel interval.
class Scale {
 public:
  Scale(double d0, double d1, double p0, double p1) : d0_(d0), d1_(d1), p0_(p0), p1_(p1) {}
  double operator()(double v) const { return d1_ == d0_ ? (p0_ + p1_) / 2 : p0_ + (v - d0_) * (p1_ - p0_) / (d1_ - d0_); }

 private:
  double d0_, d1_, p0_, p1_;
};

/// Evenly spaced "nice" tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 5);

}  // namespace infodelta::svg
