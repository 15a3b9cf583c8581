#include "declab/geometry_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "declab/errors.hpp"
#include "declab/quadrature.hpp"

namespace declab {

namespace {

// n with n*step == total, or throws.
std::int64_t integral_ratio(double total, double step, const char* what) {
  const double q = total / step;
  const double n = std::round(q);
  if (n < 1 || std::abs(q - n) > 1e-9 * std::max(1.0, n)) throw InvalidArgument(std::string(what) + ": ratio is not integral");
  return static_cast<std::int64_t>(n);
}

double bump(double u) { return u < 1 ? std::exp(1 - 1 / (1 - u * u)) : 0.0; }

constexpr double kBumpEdge = 0.35355339059327373;  // 1/(2 sqrt 2): corner of B in bump units

}  // namespace

Interval::Interval(Rational l, Rational h) : lo(l), hi(h) {
  if (!(Rational(0) <= lo && lo < hi && hi <= Rational(1)))
    throw InvalidArgument("interval must satisfy 0 <= lo < hi <= 1, got " + str());
}

Rational Interval::distance(const Interval& other) const {
  if (other.lo >= hi) return other.lo - hi;
  if (lo >= other.hi) return lo - other.hi;
  return Rational(0);
}

std::vector<Interval> Interval::partition(const Rational& step) const {
  if (step <= Rational(0)) throw InvalidArgument("partition step must be positive");
  const Rational q = length() / step;
  if (!q.is_integer()) throw InvalidArgument("partition of " + str() + " by " + step.str() + " is not integral");
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(q.num()));
  for (std::int64_t k = 0; k < q.num(); ++k) out.emplace_back(lo + step * Rational(k), lo + step * Rational(k + 1));
  return out;
}

Interval Interval::parse(const std::string& text) {
  std::string t = text;
  std::erase(t, ' ');
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  auto sep = t.find_first_of(":,");
  if (sep == std::string::npos) throw InvalidArgument("interval must look like a:b, got '" + text + "'");
  return Interval(Rational::parse(t.substr(0, sep)), Rational::parse(t.substr(sep + 1)));
}

SquareRegion::SquareRegion(Point c, double s) : center(std::move(c)), side(s) {
  if (!(side > 0) || !std::isfinite(side)) throw InvalidArgument("square side must be positive");
}

std::vector<SquareRegion> SquareRegion::partition(double r) const {
  const std::int64_t n = integral_ratio(side, r, "square partition");
  std::vector<SquareRegion> out;
  out.reserve(static_cast<std::size_t>(n * n));
  const Point lo = center.array() - half();
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i) out.emplace_back(lo + Point((i + 0.5) * r, (j + 0.5) * r), r);
  return out;
}

std::string to_string(WeightVariant v) {
  switch (v) {
    case WeightVariant::radial_w: return "radial_w";
    case WeightVariant::product_w_tilde: return "product_w_tilde";
    case WeightVariant::bump_eta: return "bump_eta";
  }
  return "?";
}

WeightVariant weight_variant_from_string(const std::string& s) {
  if (s == "radial_w") return WeightVariant::radial_w;
  if (s == "product_w_tilde") return WeightVariant::product_w_tilde;
  if (s == "bump_eta") return WeightVariant::bump_eta;
  throw InvalidArgument("unknown weight variant '" + s + "'");
}

double evaluate_weight(const WeightKind& kind, const SquareRegion& B, const Point& x) {
  const double R = B.side;
  const Point d = x - B.center;
  switch (kind.variant) {
    case WeightVariant::radial_w:
      return std::exp(-kind.exponent * std::log1p(d.norm() / R));
    case WeightVariant::product_w_tilde:
      return weight_factor_1d(d.x(), R, kind.exponent) * weight_factor_1d(d.y(), R, kind.exponent);
    case WeightVariant::bump_eta: {
      const double w = std::exp(-kind.exponent * std::log1p(d.norm() / R));
      return bump(d.norm() / (2 * R)) / bump(kBumpEdge) + w * w;
    }
  }
  return 0;
}

double weight_tail_fraction(const WeightKind& kind, double power, double u) {
  if (u <= 0) return 1;
  switch (kind.variant) {
    case WeightVariant::radial_w: {
      const double E = kind.exponent * power;
      if (E <= 2) return 1;
      // int_u^inf (1+t)^-E t dt over int_0^inf, disc of radius u inside the square
      const double tail = std::exp((2 - E) * std::log1p(u)) / (E - 2) - std::exp((1 - E) * std::log1p(u)) / (E - 1);
      return std::min(1.0, tail * (E - 1) * (E - 2));
    }
    case WeightVariant::product_w_tilde: {
      const double E = kind.exponent * power;
      if (E <= 1) return 1;
      return std::min(1.0, 2 * std::exp((1 - E) * std::log1p(u)));
    }
    case WeightVariant::bump_eta: {
      if (u < 2) return 1;
      WeightKind sq{WeightVariant::radial_w, 2 * kind.exponent};
      return weight_tail_fraction(sq, power, u);
    }
  }
  return 1;
}

ConvolutionConstants weight_convolution_check(double R, double Rp, const GridSpec& grid, double exponent) {
  if (!(Rp > 0 && Rp <= R)) throw InvalidArgument("weight_convolution_check needs 0 < Rp <= R");
  if (grid.spacing > Rp / 4 * (1 + 1e-12))
    throw InvalidArgument("grid too coarse: spacing " + std::to_string(grid.spacing) + " exceeds Rp/4");
  if (grid.extent < 8 * R * (1 - 1e-12)) throw InvalidArgument("grid must cover B(0, 8R)");
  const std::int64_t n = integral_ratio(grid.extent, grid.spacing, "convolution grid");
  if (n % 2) throw InvalidArgument("convolution grid needs an even number of intervals");
  const double h = grid.spacing;
  const Eigen::Index m = n + 1;
  const Eigen::VectorXd W = gregory_weights(m, h);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(m, -grid.extent / 2, grid.extent / 2);

  // kernel w_R on the difference lattice
  const Eigen::Index K = 2 * n + 1;
  Eigen::MatrixXd A(K, K);
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = 0; b < K; ++b)
      A(a, b) = std::exp(-exponent * std::log1p(std::hypot((a - n) * h, (b - n) * h) / R));

  Eigen::MatrixXd V(m, m), V1(m, m), wR(m, m);
  const std::int64_t half_B = integral_ratio(R / 2, h, "B(0,R) alignment");
  Eigen::VectorXd WB = Eigen::VectorXd::Zero(m);
  WB.segment(n / 2 - half_B, 2 * half_B + 1) = gregory_weights(2 * half_B + 1, h);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double r = std::hypot(y(i), y(j));
      V(i, j) = W(i) * W(j) * std::exp(-exponent * std::log1p(r / Rp));
      V1(i, j) = WB(i) * WB(j);
      wR(i, j) = std::exp(-exponent * std::log1p(r / R));
    }

  auto correlate = [&](const Eigen::MatrixXd& src) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k1 = 0; k1 < m; ++k1) {
      for (Eigen::Index k2 = 0; k2 < m; ++k2) {
        const double v = src(k1, k2);
        if (v == 0) continue;
        // out(i1, i2) += A(i1 - k1 + n, i2 - k2 + n) * v
        out += v * A.block(n - k1, n - k2, m, m);
      }
    }
    return out;
  };
  const Eigen::MatrixXd conv = correlate(V);
  const Eigen::MatrixXd conv1 = correlate(V1);

  ConvolutionConstants out;
  out.upper = (conv.array() / (Rp * Rp * wR.array())).maxCoeff();
  out.lower = ((R * R * wR.array()) / conv1.array()).maxCoeff();
  out.lower_ratio_at_center = conv1(n / 2, n / 2) / (R * R * wR(n / 2, n / 2));
  const double E = exponent;
  out.tail_bound = std::exp(-E * std::log1p(grid.extent / (2 * Rp))) * 2 * M_PI * R * R / ((E - 1) * (E - 2));
  out.nodes = m * m;
  return out;
}

double subweight_ratio_at(const SquareRegion& B, double r, const Point& x, double exponent) {
  const auto tiles = B.partition(r);
  const double lb = std::log1p((x - B.center).norm() / B.side);
  double sum = 0;
  for (const auto& t : tiles) sum += std::exp(-exponent * (std::log1p((x - t.center).norm() / r) - lb));
  return sum;
}

SubweightConstant sum_of_subweights_check(const SquareRegion& B, double r, const GridSpec& grid, double exponent) {
  const auto tiles = B.partition(r);
  const std::int64_t n = integral_ratio(grid.extent, grid.spacing, "subweight grid");
  SubweightConstant out;
  out.tiles = static_cast<std::int64_t>(tiles.size());
  out.nodes = (n + 1) * (n + 1);
  for (std::int64_t j = 0; j <= n; ++j)
    for (std::int64_t i = 0; i <= n; ++i) {
      const Point x = B.center + Point(-grid.extent / 2 + i * grid.spacing, -grid.extent / 2 + j * grid.spacing);
      const double v = subweight_ratio_at(B, r, x, exponent);
      if (v > out.constant) {
        out.constant = v;
        out.argmax = x;
      }
    }
  return out;
}

OrientedBox::OrientedBox(Point c, double l, double s, Point dir) : center(std::move(c)), long_side(l), short_side(s) {
  if (!(l > 0 && s > 0)) throw InvalidArgument("degenerate oriented box");
  if (l < s) throw InvalidArgument("oriented box needs long >= short");
  const double nrm = dir.norm();
  if (!(nrm > 0)) throw InvalidArgument("oriented box direction must be nonzero");
  direction = dir / nrm;
}

std::array<Point, 4> OrientedBox::vertices() const {
  const Point a = 0.5 * long_side * direction;
  const Point b = 0.5 * short_side * normal();
  // normal() is direction rotated by +90 degrees, so this order is counter-clockwise
  return {center - a - b, center + a - b, center + a + b, center - a + b};
}

Polygon<double> OrientedBox::polygon() const {
  auto v = vertices();
  return Polygon<double>(v.begin(), v.end());
}

bool OrientedBox::contains(const Point& x, double slack) const {
  const Point d = x - center;
  return std::abs(d.dot(direction)) <= 0.5 * long_side + slack && std::abs(d.dot(normal())) <= 0.5 * short_side + slack;
}

double oriented_box_intersection_area(const OrientedBox& P1, const OrientedBox& P2) {
  if (!(P1.area() > 0 && P2.area() > 0)) throw InvalidArgument("degenerate oriented box");
  // clip in P1's frame so coordinates stay O(box size)
  const Point o = P1.center;
  auto shift = [&](Polygon<double> p) {
    for (auto& v : p) v -= o;
    return p;
  };
  const double a = polygon_area(clip_convex(shift(P2.polygon()), shift(P1.polygon())));
  return std::max(0.0, a);
}

double monte_carlo_intersection_area(const OrientedBox& P1, const OrientedBox& P2, std::int64_t samples,
                                     std::uint64_t seed) {
  const Point d = P1.direction, nrm = P1.normal();
  // shadow of P2 on P1's long axis, clamped to P1
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : P2.vertices()) {
    const double t = (v - P1.center).dot(d);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  lo = std::max(lo, -0.5 * P1.long_side);
  hi = std::min(hi, 0.5 * P1.long_side);
  if (hi <= lo) return 0;
  const auto side = static_cast<std::int64_t>(std::max(1.0, std::floor(std::sqrt(static_cast<double>(samples)))));
  const double du = (hi - lo) / side, dv = P1.short_side / side;
  std::uint64_t state = seed;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < side; ++i)
    for (std::int64_t j = 0; j < side; ++j) {
      const double u = lo + (i + unit_from_bits(mix64(state++))) * du;
      const double v = -0.5 * P1.short_side + (j + unit_from_bits(mix64(state++))) * dv;
      if (P2.contains(P1.center + u * d + v * nrm)) ++hits;
    }
  return (hi - lo) * P1.short_side * static_cast<double>(hits) / static_cast<double>(side * side);
}

Point tiling_direction(double c) {
  const Point d(-2 * c, 1.0);
  return d / d.norm();
}

Point tiling_direction(const Interval& J) { return tiling_direction(J.center().to_double()); }

std::vector<OrientedBox> build_tiling(const Interval& J, const SquareRegion& delta_prime, int b, const Rational& nu) {
  if (b < 1) throw InvalidArgument("tiling needs b >= 1");
  if (!(Rational(0) < nu && nu < Rational(1))) throw InvalidArgument("tiling needs 0 < nu < 1");
  const Rational nub = nu.pow(b);
  if (J.length() != nub) throw InvalidArgument("tiling needs |J| = nu^b");
  const Rational inv = nub.inverse();
  if (!inv.is_integer()) throw InvalidArgument("tiling needs nu^-b integral");
  const double L = (inv * inv).to_double(), S = inv.to_double();
  if (std::abs(delta_prime.side - L) > 1e-9 * L) throw InvalidArgument("tiling needs side(Delta') = nu^-2b");
  return tile_square(delta_prime, tiling_direction(J), L, S);
}

std::vector<OrientedBox> tile_square(const SquareRegion& delta_prime, const Point& direction, double L, double S) {
  if (!(L >= S && S > 0)) throw InvalidArgument("tiling boxes need long >= short > 0");
  const Point d = direction / direction.norm();
  const Point nrm(-d.y(), d.x());
  const double h = delta_prime.half();
  std::array<Point, 4> corners = {delta_prime.center + Point(-h, -h), delta_prime.center + Point(h, -h),
                                  delta_prime.center + Point(h, h), delta_prime.center + Point(-h, h)};
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (const auto& c : corners) {
    vmin = std::min(vmin, c.dot(nrm));
    vmax = std::max(vmax, c.dot(nrm));
  }
  const Polygon<double> square(corners.begin(), corners.end());
  std::vector<OrientedBox> out;
  const auto strips = static_cast<std::int64_t>(std::ceil((vmax - vmin) / S - 1e-12));
  for (std::int64_t k = 0; k < strips; ++k) {
    const double v0 = vmin + k * S, v1 = v0 + S;
    // u-extent of the strip inside the square
    const double lo = delta_prime.center.dot(d) - 4 * L, hi = lo + 8 * L;
    Polygon<double> strip = {v0 * nrm + lo * d, v0 * nrm + hi * d, v1 * nrm + hi * d, v1 * nrm + lo * d};
    if (polygon_area(strip) < 0) std::reverse(strip.begin(), strip.end());
    const auto piece = clip_convex(square, strip);
    if (piece.size() < 3 || polygon_area(piece) <= 1e-12 * L * S) continue;
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    for (const auto& p : piece) {
      umin = std::min(umin, p.dot(d));
      umax = std::max(umax, p.dot(d));
    }
    const auto count = static_cast<std::int64_t>(std::max(1.0, std::ceil((umax - umin) / L - 1e-12)));
    for (std::int64_t m = 0; m < count; ++m) {
      const double u = umin + (m + 0.5) * L;
      out.emplace_back(u * d + (v0 + 0.5 * S) * nrm, L, S, d);
    }
  }
  return out;
}

}  // namespace declab
