#include "declab/extension_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "declab/errors.hpp"
#include "declab/quadrature.hpp"

namespace declab {

namespace {

Eigen::Index ceil_multiple(double q, Eigen::Index m) {
  auto n = static_cast<Eigen::Index>(std::ceil(q - 1e-9));
  n = std::max<Eigen::Index>(n, 1);
  return ((n + m - 1) / m) * m;
}


// e(f_k t_i) * scale_k as an (|t| x K) matrix
Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& t, const Eigen::VectorXd& f) {
  Eigen::MatrixXcd m(t.size(), f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k)
    for (Eigen::Index i = 0; i < t.size(); ++i) m(i, k) = unit_phase(f(k) * t(i));
  return m;
}

double total_weight_mass(const WeightKind& kind, double power, double R) {
  const double E = kind.exponent * power;
  switch (kind.variant) {
    case WeightVariant::radial_w: return E > 2 ? 2 * std::numbers::pi * R * R / ((E - 1) * (E - 2)) : kInfinity;
    case WeightVariant::product_w_tilde: return E > 1 ? std::pow(2 * R / (E - 1), 2) : kInfinity;
    case WeightVariant::bump_eta: {
      // bump part is at most 1/bump(edge) on the disc of radius 2R; powers > 1 only shrink it
      const double bump_part = std::numbers::pi * 4 * R * R * std::pow(std::exp(1 / (1 - 0.125) - 1), std::max(1.0, power));
      WeightKind sq{WeightVariant::radial_w, 2 * kind.exponent};
      return std::pow(2.0, std::max(0.0, power - 1)) * (bump_part + total_weight_mass(sq, power, R));
    }
  }
  return kInfinity;
}

struct Region {
  NodeRange range;
  SquareRegion square;
};

Region integration_region(const SampledField& f, const NormMode& mode) {
  if (mode.kind != NormMode::Kind::weighted) return {node_range(f.grid, f.square), f.square};
  const double rho = mode.extent > 0 ? mode.extent : choose_extent(mode.weight, mode.power);
  const double grid_side = std::min(f.grid.spacing * (f.grid.nx - 1), f.grid.spacing_y * (f.grid.ny - 1));
  if (rho * f.square.side >= grid_side * (1 - 1e-12)) {
    NodeRange all{0, f.grid.nx - 1, 0, f.grid.ny - 1};
    return {all, SquareRegion(f.square.center, grid_side)};
  }
  SquareRegion sq = f.square.scaled(rho);
  return {node_range(f.grid, sq), sq};
}

}  // namespace

Eigen::VectorXd Grid::xs() const {
  Eigen::VectorXd v(nx);
  for (Eigen::Index i = 0; i < nx; ++i) v(i) = x(i);
  return v;
}

Eigen::VectorXd Grid::ys() const {
  Eigen::VectorXd v(ny);
  for (Eigen::Index j = 0; j < ny; ++j) v(j) = y(j);
  return v;
}

Grid Grid::covering(const SquareRegion& B, double max_spacing, double factor) {
  if (!(max_spacing > 0)) throw InvalidArgument("grid spacing must be positive");
  if (!(factor > 0)) throw InvalidArgument("grid extent factor must be positive");
  const double k = std::ceil(factor * 8 - 1e-9);
  factor = std::max(1.0, k / 8);
  const Eigen::Index nB = ceil_multiple(B.side / max_spacing, 16);
  const auto n = static_cast<Eigen::Index>(std::llround(factor * static_cast<double>(nB)));
  Grid g;
  g.spacing = g.spacing_y = B.side / static_cast<double>(nB);
  g.nx = g.ny = n + 1;
  for (int a = 0; a < 2; ++a) g.origin(a) = B.center(a) - 0.5 * static_cast<double>(n) * g.spacing;
  return g;
}

Grid Grid::rectangle(Point lo, Point hi, double max_hx, double max_hy) {
  if (!(max_hx > 0 && max_hy > 0)) throw InvalidArgument("grid spacing must be positive");
  Grid g;
  const Eigen::Index mx = ceil_multiple((hi.x() - lo.x()) / max_hx, 16);
  const Eigen::Index my = ceil_multiple((hi.y() - lo.y()) / max_hy, 16);
  g.origin = lo;
  g.spacing = (hi.x() - lo.x()) / static_cast<double>(mx);
  g.spacing_y = (hi.y() - lo.y()) / static_cast<double>(my);
  g.nx = mx + 1;
  g.ny = my + 1;
  return g;
}

NodeRange node_range(const Grid& grid, const SquareRegion& sq) {
  auto snap = [](double t, Eigen::Index n, const char* what) {
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-6 || r < 0 || r > static_cast<double>(n - 1))
      throw InvalidArgument(std::string("square is not node-aligned with the grid (") + what + ")");
    return static_cast<Eigen::Index>(r);
  };
  NodeRange nr;
  nr.i0 = snap((sq.center.x() - sq.half() - grid.origin.x()) / grid.spacing, grid.nx, "x lo");
  nr.i1 = snap((sq.center.x() + sq.half() - grid.origin.x()) / grid.spacing, grid.nx, "x hi");
  nr.j0 = snap((sq.center.y() - sq.half() - grid.origin.y()) / grid.spacing_y, grid.ny, "y lo");
  nr.j1 = snap((sq.center.y() + sq.half() - grid.origin.y()) / grid.spacing_y, grid.ny, "y hi");
  return nr;
}

void PlaneWaves::append(const PlaneWaves& o) {
  const Eigen::Index n = size(), m = o.size();
  f1.conservativeResize(n + m);
  f2.conservativeResize(n + m);
  c.conservativeResize(n + m);
  f1.tail(m) = o.f1;
  f2.tail(m) = o.f2;
  c.tail(m) = o.c;
}

FieldMatrix evaluate_plane_waves(const PlaneWaves& w, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const double bytes = 16.0 * static_cast<double>(xs.size()) * static_cast<double>(ys.size());
  if (bytes > 3e9) throw ResourceGuard("field of " + std::to_string(xs.size()) + "x" + std::to_string(ys.size()) +
                                       " nodes exceeds the memory guard");
  if (w.size() == 0) return FieldMatrix::Zero(ys.size(), xs.size());
  Eigen::MatrixXcd A = phase_matrix(xs, w.f1);
  A *= w.c.asDiagonal();
  const Eigen::MatrixXcd B = phase_matrix(ys, w.f2);
  FieldMatrix out(ys.size(), xs.size());
  out.noalias() = B * A.transpose();
  return out;
}

cdouble evaluate_plane_waves_at(const PlaneWaves& w, const Point& x) {
  cdouble s = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) s += w.c(k) * unit_phase(w.f1(k) * x.x() + w.f2(k) * x.y());
  return s;
}

std::vector<Point> sample_points(const Grid& grid) {
  std::vector<Point> pts;
  const Eigen::Index ix[3] = {0, (grid.nx - 1) / 2, grid.nx - 1};
  const Eigen::Index jy[3] = {0, (grid.ny - 1) / 2, grid.ny - 1};
  for (auto j : jy)
    for (auto i : ix) pts.push_back(grid.node(i, j));
  for (std::uint64_t k = 0; k < 24; ++k) {
    const auto i = static_cast<Eigen::Index>(mix64(2 * k + 0x51) % static_cast<std::uint64_t>(grid.nx));
    const auto j = static_cast<Eigen::Index>(mix64(2 * k + 0x52) % static_cast<std::uint64_t>(grid.ny));
    pts.push_back(grid.node(i, j));
  }
  return pts;
}

QuadratureRule build_rule(const DensityFunction& g, const Interval& J, const CurveSpec& curve,
                          const std::vector<Point>& samples, const QuadratureOptions& opts) {
  if (!curve.domain().contains(J)) throw InvalidArgument("interval " + J.str() + " is outside the curve domain");
  if (opts.max_doublings < 1 || !(opts.tolerance > 0)) throw InvalidArgument("quadrature needs max_doublings >= 1 and tolerance > 0");
  QuadratureRule rule;
  const auto atoms = g.atoms_in(J);
  if (!atoms.empty()) {
    PlaneWaves a;
    a.f1.resize(atoms.size());
    a.f2.resize(atoms.size());
    a.c.resize(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      a.f1(k) = atoms[k].location;
      a.f2(k) = curve.h(atoms[k].location);
      a.c(k) = atoms[k].mass;
    }
    rule.waves.append(a);
  }
  if (!g.has_continuous_part()) return rule;

  const double lo = J.lo_d(), hi = J.hi_d();
  std::vector<double> cuts = {lo};
  for (double b : g.breakpoints(lo, hi)) cuts.push_back(b);
  cuts.push_back(hi);

  double mx1 = 0, mx2 = 0;
  for (const auto& s : samples) {
    mx1 = std::max(mx1, std::abs(s.x()));
    mx2 = std::max(mx2, std::abs(s.y()));
  }
  const double rate = mx1 + curve.max_abs_slope(J) * mx2 + g.phase_rate(lo, hi) + 1.0;
  std::vector<std::int64_t> base(cuts.size() - 1);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
    base[p] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((cuts[p + 1] - cuts[p]) * rate / opts.cycles_per_panel)));

  const auto& [gx, gw] = gauss_legendre(opts.order);
  auto assemble = [&](int level) {
    std::int64_t total = 0;
    for (auto b : base) total += b << level;
    if (total * opts.order > (std::int64_t{1} << 24)) return PlaneWaves{};
    PlaneWaves w;
    w.f1.resize(total * opts.order);
    w.f2.resize(total * opts.order);
    w.c.resize(total * opts.order);
    Eigen::Index k = 0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const std::int64_t panels = base[p] << level;
      const double width = (cuts[p + 1] - cuts[p]) / static_cast<double>(panels);
      for (std::int64_t q = 0; q < panels; ++q) {
        const double a = cuts[p] + static_cast<double>(q) * width;
        for (int m = 0; m < opts.order; ++m, ++k) {
          const double xi = a + 0.5 * width * (gx(m) + 1);
          w.f1(k) = xi;
          w.f2(k) = curve.h(xi);
          w.c(k) = 0.5 * width * gw(m) * g(xi);
        }
      }
    }
    return w;
  };
  auto at_samples = [&](const PlaneWaves& w) {
    std::vector<cdouble> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(evaluate_plane_waves_at(w, s));
    return v;
  };

  PlaneWaves prev = assemble(0);
  std::vector<cdouble> sprev = at_samples(prev);
  for (int d = 1; d <= opts.max_doublings; ++d) {
    PlaneWaves cur = assemble(d);
    if (cur.size() == 0) throw QuadratureError("quadrature node budget exhausted on " + J.str(), sprev, sprev);
    std::vector<cdouble> scur = at_samples(cur);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < scur.size(); ++i) {
      diff = std::max(diff, std::abs(scur[i] - sprev[i]));
      scale = std::max(scale, std::abs(scur[i]));
    }
    const double rel = scale > 0 ? diff / scale : 0.0;
    if (rel < opts.tolerance) {
      int panels = 0;
      for (auto b : base) panels += static_cast<int>(b << (d - 1));
      rule.panels = panels;
      rule.doublings = d - 1;
      rule.estimated_error = rel;
      rule.waves.append(prev);
      return rule;
    }
    prev = std::move(cur);
    sprev = std::move(scur);
  }
  throw QuadratureError("quadrature did not converge on " + J.str() + " after " + std::to_string(opts.max_doublings) +
                            " doublings",
                        at_samples(assemble(opts.max_doublings - 1)), sprev);
}

SampledField evaluate_extension(const DensityFunction& g, const Interval& J, const CurveSpec& curve, const SquareRegion& B,
                                double spacing, double factor, const QuadratureOptions& opts) {
  if (!(spacing > 0 && spacing <= 0.25 + 1e-15)) throw InvalidArgument("grid spacing must lie in (0, 1/4]");
  SampledField f;
  f.grid = Grid::covering(B, spacing, factor);
  f.square = B;
  const QuadratureRule rule = build_rule(g, J, curve, sample_points(f.grid), opts);
  f.values = evaluate_plane_waves(rule.waves, f.grid.xs(), f.grid.ys());
  return f;
}

cdouble extension_at(const DensityFunction& g, const Interval& J, const CurveSpec& curve, const Point& x,
                     const QuadratureOptions& opts) {
  const QuadratureRule rule = build_rule(g, J, curve, {x, Point::Zero()}, opts);
  return evaluate_plane_waves_at(rule.waves, x);
}

double choose_extent(const WeightKind& kind, double power, double tol) {
  for (int k = 1; k <= 64; ++k)
    if (weight_tail_fraction(kind, power, k / 16.0) <= tol) return k / 8.0;
  return 8.0;
}

double lp_integral(const SampledField& f, double p, const NormMode& mode) {
  if (!(p >= 1)) throw InvalidArgument("L^p norms need p >= 1");
  const Region reg = integration_region(f, mode);
  const NodeRange& r = reg.range;
  const Eigen::VectorXd gx = gregory_weights(r.cols(), f.grid.spacing);
  const Eigen::VectorXd gy = gregory_weights(r.rows(), f.grid.spacing_y);
  const bool weighted = mode.kind == NormMode::Kind::weighted;
  const WeightKind& wk = mode.weight;
  const double R = f.square.side;

  Eigen::VectorXd px(r.cols());
  for (Eigen::Index i = 0; i < r.cols(); ++i) px(i) = f.grid.x(r.i0 + i) - f.square.center.x();

  // weight factors for the product weight separate
  Eigen::VectorXd wx = Eigen::VectorXd::Ones(r.cols());
  if (weighted && wk.variant == WeightVariant::product_w_tilde)
    for (Eigen::Index i = 0; i < r.cols(); ++i) wx(i) = std::pow(weight_factor_1d(px(i), R, wk.exponent), mode.power);

  const bool sup = std::isinf(p);
  double acc = 0;
  Eigen::ArrayXd row_w(r.cols()), mag(r.cols());
  for (Eigen::Index j = r.j0; j <= r.j1; ++j) {
    const double py = f.grid.y(j) - f.square.center.y();
    if (!weighted) {
      row_w = gx.array();
    } else if (wk.variant == WeightVariant::product_w_tilde) {
      row_w = gx.array() * wx.array() * std::pow(weight_factor_1d(py, R, wk.exponent), mode.power);
    } else {
      for (Eigen::Index i = 0; i < r.cols(); ++i)
        row_w(i) = gx(i) * std::pow(evaluate_weight(wk, f.square, f.square.center + Point(px(i), py)), mode.power);
    }
    mag = f.values.row(j).segment(r.i0, r.cols()).array().abs2();
    if (sup) {
      if (weighted) mag *= row_w / gx.array();
      acc = std::max(acc, std::sqrt(mag.maxCoeff()));
      continue;
    }
    if (p == 2) {
      acc += gy(j - r.j0) * (mag * row_w).sum();
    } else {
      acc += gy(j - r.j0) * ((mag.log() * (0.5 * p)).exp() * row_w).sum();
    }
  }
  if (sup) return acc;
  if (mode.kind == NormMode::Kind::normalized || (weighted && mode.average)) acc /= f.square.area();
  return acc;
}

double lp_norm(const SampledField& f, double p, const NormMode& mode) {
  const double v = lp_integral(f, p, mode);
  return std::isinf(p) ? v : std::pow(v, 1 / p);
}

double weighted_tail_bound(const SampledField& f, double p, const NormMode& mode, double sup_bound) {
  if (mode.kind != NormMode::Kind::weighted) return 0;
  const Region reg = integration_region(f, mode);
  const double u = reg.square.half() / f.square.side;
  double t = weight_tail_fraction(mode.weight, mode.power, u) * total_weight_mass(mode.weight, mode.power, f.square.side) *
             std::pow(sup_bound, p);
  if (mode.average) t /= f.square.area();
  return t;
}

namespace {

double grid_integral(const FieldMatrix& v, const Grid& g, double p) {
  const Eigen::VectorXd gx = gregory_weights(g.nx, g.spacing);
  const Eigen::VectorXd gy = gregory_weights(g.ny, g.spacing_y);
  double acc = 0;
  for (Eigen::Index j = 0; j < g.ny; ++j) {
    Eigen::ArrayXd mag = v.row(j).array().abs2();
    if (p != 2) mag = (mag.log() * (0.5 * p)).exp();
    acc += gy(j) * (mag * gx.array()).sum();
  }
  return acc;
}

}  // namespace

double parabolic_rescale_identity_check(const DensityFunction& g, const Interval& I, double p, const SquareRegion& B,
                                        double spacing, const QuadratureOptions& opts) {
  if (!(p >= 1) || std::isinf(p)) throw InvalidArgument("rescaling check needs finite p >= 1");
  const CurveSpec curve = CurveSpec::parabola(1.0);
  const SampledField lhs_field = evaluate_extension(g, I, curve, B, spacing, 1.0, opts);
  const double lhs = std::pow(lp_integral(lhs_field, p, NormMode::plain()), 1 / p);

  const double sigma = I.length().to_double(), a = I.lo_d();
  const double s = 2 * a / sigma;
  const DensityFunction ga = g.pullback(sigma, a);
  const Point lo(sigma * (B.center.x() - B.half()), sigma * sigma * (B.center.y() - B.half()));
  const Point hi(sigma * (B.center.x() + B.half()), sigma * sigma * (B.center.y() + B.half()));
  const Grid grid = Grid::rectangle(lo, hi, spacing, spacing / (1 + s));
  // the doubling check runs in the y-plane, y = (u + s v, v)
  std::vector<Point> samples = sample_points(grid);
  for (auto& q : samples) q = Point(q.x() + s * q.y(), q.y());
  QuadratureRule rule = build_rule(ga, Interval::unit(), curve, samples, opts);
  rule.waves.f2 = s * rule.waves.f1 + rule.waves.f2;
  const FieldMatrix vals = evaluate_plane_waves(rule.waves, grid.xs(), grid.ys());
  const double rhs = std::pow(sigma, 1 - 3 / p) * std::pow(grid_integral(vals, grid, p), 1 / p);
  if (lhs == 0) return rhs == 0 ? 0.0 : kInfinity;
  return std::abs(lhs - rhs) / lhs;
}

SampledField anisotropic_rescale(const SampledField& f, double r) {
  if (!(r > 0)) throw InvalidArgument("anisotropic rescaling needs r > 0");
  if (f.grid.ny < 6) throw InvalidArgument("anisotropic rescaling needs at least 6 rows");
  const double y0 = f.grid.origin.y(), h = f.grid.spacing_y;
  const double len = static_cast<double>(f.grid.ny - 1) * h / r;
  const auto m = std::max<Eigen::Index>(6, static_cast<Eigen::Index>(std::ceil(len / h - 1e-9)));
  SampledField out;
  out.grid = f.grid;
  out.grid.origin.y() = y0 / r;
  out.grid.spacing_y = len / static_cast<double>(m);
  out.grid.ny = m + 1;
  out.square = f.square;
  out.values.resize(out.grid.ny, f.grid.nx);
  for (Eigen::Index j = 0; j < out.grid.ny; ++j) {
    const double t = (r * out.grid.y(j) - y0) / h;  // fractional source row
    const double tr = std::round(t);
    if (std::abs(t - tr) < 1e-12) {
      out.values.row(j) = r * f.values.row(std::clamp<Eigen::Index>(static_cast<Eigen::Index>(tr), 0, f.grid.ny - 1));
      continue;
    }
    const auto k0 = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(t)) - 2, 0, f.grid.ny - 6);
    double wts[6];
    for (int a = 0; a < 6; ++a) {
      double l = 1;
      for (int b = 0; b < 6; ++b)
        if (b != a) l *= (t - static_cast<double>(k0 + b)) / static_cast<double>(a - b);
      wts[a] = l;
    }
    out.values.row(j).setZero();
    for (int a = 0; a < 6; ++a) out.values.row(j) += (r * wts[a]) * f.values.row(k0 + a);
  }
  return out;
}

double anisotropic_rescale_identity_check(double r, double p, const SampledField& f) {
  if (!(p >= 1) || std::isinf(p)) throw InvalidArgument("rescaling check needs finite p >= 1");
  const SampledField fr = anisotropic_rescale(f, r);
  const double lhs = std::pow(grid_integral(f.values, f.grid, p), 1 / p);
  const double rhs = std::pow(r, 1 / p - 1) * std::pow(grid_integral(fr.values, fr.grid, p), 1 / p);
  if (lhs == 0) return rhs == 0 ? 0.0 : kInfinity;
  return std::abs(lhs - rhs) / lhs;
}

double reverse_holder_ratio(const DensityFunction& g, const Interval& J, double p, double q, const SquareRegion& B,
                            double spacing, const WeightKind& weight) {
  if (!(p >= 1 && p < q)) throw InvalidArgument("reverse Holder needs 1 <= p < q");
  if (std::abs(J.length().to_double() * B.side - 1) > 1e-9) throw InvalidArgument("reverse Holder needs |J| * side(B) = 1");
  if (g.is_zero()) return 0;
  const bool sup = std::isinf(q);
  const NormMode lhs_mode = sup ? NormMode::plain() : NormMode::weighted(weight, 1.0, true);
  const NormMode rhs_mode = NormMode::weighted(weight, sup ? 1.0 : p / q, true);
  const double factor = std::max(choose_extent(weight, 1.0), choose_extent(weight, rhs_mode.power));
  const SampledField F = evaluate_extension(g, J, CurveSpec::parabola(1.0), B, spacing, factor);
  const double lhs = lp_norm(F, q, lhs_mode), rhs = lp_norm(F, p, rhs_mode);
  return rhs > 0 ? lhs / rhs : 0.0;
}

double l2_decoupling_ratio(const DensityFunction& g, const Interval& J, const SquareRegion& B, double spacing,
                           const WeightKind& weight) {
  const double side = std::round(B.side);
  if (std::abs(side - B.side) > 1e-9 || side < 1) throw InvalidArgument("l2 decoupling needs an integral side length");
  const Rational step(1, static_cast<std::int64_t>(side));
  const auto children = J.partition(step);
  if (g.is_zero()) return 0;
  const NormMode mode = NormMode::weighted(weight, 1.0);
  const double factor = choose_extent(weight, 1.0);
  const CurveSpec curve = CurveSpec::parabola(1.0);
  const double lhs = lp_integral(evaluate_extension(g, J, curve, B, spacing, factor), 2, mode);
  double rhs = 0;
  for (const auto& c : children) rhs += lp_integral(evaluate_extension(g, c, curve, B, spacing, factor), 2, mode);
  return rhs > 0 ? lhs / rhs : 0.0;
}

}  // namespace declab
