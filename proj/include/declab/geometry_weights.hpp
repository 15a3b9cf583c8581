#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "declab/rational.hpp"

namespace declab {

using Point = Eigen::Vector2d;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

// [lo, hi] with rational endpoints in [0, 1].
struct Interval {
  Rational lo{0};
  Rational hi{1};

  Interval() = default;
  Interval(Rational lo, Rational hi);

  static Interval unit() { return {}; }

  Rational length() const { return hi - lo; }
  Rational center() const { return (lo + hi) / Rational(2); }
  double lo_d() const { return lo.to_double(); }
  double hi_d() const { return hi.to_double(); }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool contains(double xi) const { return lo_d() <= xi && xi <= hi_d(); }
  // Gap between the two intervals, zero when they overlap or touch.
  Rational distance(const Interval& other) const;

  // Children of length step, left to right. Requires length/step integral.
  std::vector<Interval> partition(const Rational& step) const;

  std::string str() const { return "[" + lo.str() + "," + hi.str() + "]"; }
  static Interval parse(const std::string& text);  // "a:b" or "[a,b]"
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Axis-parallel square B(c, R) of side R.
struct SquareRegion {
  Point center = Point::Zero();
  double side = 1.0;

  SquareRegion() = default;
  SquareRegion(Point c, double s);

  double area() const { return side * side; }
  double half() const { return 0.5 * side; }
  bool contains(const Point& x, double slack = 0) const {
    return ((x - center).array().abs() <= half() + slack).all();
  }
  SquareRegion scaled(double factor) const { return {center, side * factor}; }
  SquareRegion translated(const Point& v) const { return {center + v, side}; }
  // Row-major tiling by squares of side r (rows ascending in x2). Requires side/r integral.
  std::vector<SquareRegion> partition(double r) const;
};

enum class WeightVariant { radial_w, product_w_tilde, bump_eta };

struct WeightKind {
  WeightVariant variant = WeightVariant::radial_w;
  double exponent = 100.0;
};

std::string to_string(WeightVariant v);
WeightVariant weight_variant_from_string(const std::string& s);

// (1 + |t|/R)^(-e), the one-dimensional factor of the product weight.
inline double weight_factor_1d(double t, double R, double e) { return std::exp(-e * std::log1p(std::abs(t) / R)); }

double evaluate_weight(const WeightKind& kind, const SquareRegion& B, const Point& x);

// Upper bound on the fraction of the mass of weight^power lying outside the square of half-side u*R
// around the centre. Returns 1 when no useful bound is available.
double weight_tail_fraction(const WeightKind& kind, double power, double u);

struct GridSpec {
  double spacing = 0.125;
  double extent = 8.0;  // side of the square grid, centred at the origin
};

struct ConvolutionConstants {
  double upper = 0;                   // sup (w_R * w_Rp) / (Rp^2 w_R)
  double lower = 0;                   // sup R^2 w_R / (1_B * w_R)
  double lower_ratio_at_center = 0;   // (1_B * w_R)(0) / (R^2 w_R(0))
  double tail_bound = 0;              // absolute bound on the mass discarded by truncating to the grid
  std::int64_t nodes = 0;
};

ConvolutionConstants weight_convolution_check(double R, double Rp, const GridSpec& grid, double exponent = 100.0);

struct SubweightConstant {
  double constant = 0;
  Point argmax = Point::Zero();
  std::int64_t tiles = 0;
  std::int64_t nodes = 0;
};

// sum_{Delta in partition(r)} w_Delta(x) / w_B(x)
double subweight_ratio_at(const SquareRegion& B, double r, const Point& x, double exponent = 100.0);
SubweightConstant sum_of_subweights_check(const SquareRegion& B, double r, const GridSpec& grid,
                                          double exponent = 100.0);

// ---- polygons ----

template <typename Scalar>
using Polygon = std::vector<Point2<Scalar>>;

template <typename Scalar>
Scalar polygon_area(const Polygon<Scalar>& poly) {
  Scalar twice(0);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return twice / Scalar(2);
}

// Sutherland-Hodgman clip of `subject` against the convex counter-clockwise polygon `clip`.
template <typename Scalar>
Polygon<Scalar> clip_convex(const Polygon<Scalar>& subject, const Polygon<Scalar>& clip) {
  Polygon<Scalar> out = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Point2<Scalar> a = clip[e];
    const Point2<Scalar> edge = clip[(e + 1) % m] - a;
    auto side = [&](const Point2<Scalar>& p) {
      const Point2<Scalar> d = p - a;
      return edge.x() * d.y() - edge.y() * d.x();
    };
    Polygon<Scalar> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point2<Scalar>& cur = in[i];
      const Point2<Scalar>& nxt = in[(i + 1) % in.size()];
      const Scalar sc = side(cur), sn = side(nxt);
      if (sc >= Scalar(0)) out.push_back(cur);
      if ((sc >= Scalar(0)) != (sn >= Scalar(0))) {
        const Scalar t = sc / (sc - sn);
        out.push_back(cur + t * (nxt - cur));
      }
    }
  }
  return out;
}

// Rectangle with its long side along `direction`.
struct OrientedBox {
  Point center = Point::Zero();
  double long_side = 1.0;
  double short_side = 1.0;
  Point direction = Point(0, 1);

  OrientedBox() = default;
  OrientedBox(Point c, double l, double s, Point dir);

  Point normal() const { return {-direction.y(), direction.x()}; }
  // Counter-clockwise.
  std::array<Point, 4> vertices() const;
  Polygon<double> polygon() const;
  double area() const { return long_side * short_side; }
  bool contains(const Point& x, double slack = 0) const;
  OrientedBox dilated(double factor) const { return {center, long_side * factor, short_side * factor, direction}; }
};

double oriented_box_intersection_area(const OrientedBox& P1, const OrientedBox& P2);

// Stratified jittered estimate of |P1 ∩ P2|, sampling the part of P1 overlapping P2's shadow on P1's axis.
double monte_carlo_intersection_area(const OrientedBox& P1, const OrientedBox& P2, std::int64_t samples,
                                     std::uint64_t seed);

// Long-side direction for the tiling attached to J: (-2 c_J, 1) normalised.
Point tiling_direction(const Interval& J);
Point tiling_direction(double center);

// Strips of width short_side across the square, normal to `direction`; each strip is cut into boxes of length
// long_side starting from its lowest point.
std::vector<OrientedBox> tile_square(const SquareRegion& sq, const Point& direction, double long_side, double short_side);

std::vector<OrientedBox> build_tiling(const Interval& J, const SquareRegion& delta_prime, int b, const Rational& nu);

}  // namespace declab
