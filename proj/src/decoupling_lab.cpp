#include "declab/decoupling_lab.hpp"

#include <algorithm>
#include <cmath>

#include "declab/errors.hpp"
#include "declab/parallel.hpp"
#include "declab/quadrature.hpp"

namespace declab {

namespace {

constexpr Eigen::Index kRowBlock = 32;

Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& t, const Eigen::VectorXd& f) {
  Eigen::MatrixXcd m(t.size(), f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k)
    for (Eigen::Index i = 0; i < t.size(); ++i) m(i, k) = unit_phase(f(k) * t(i));
  return m;
}

bool is_unit_fraction(const Rational& r) { return r > Rational(0) && r <= Rational(1) && r.num() == 1; }

// |a|^p given |a|^2, for a whole block at once
template <typename Derived>
Eigen::ArrayXXd pow_from_abs2(const Eigen::ArrayBase<Derived>& a2, double p) {
  if (p == 2) return a2;
  return (a2.log() * (0.5 * p)).exp();
}

struct KernelOut {
  Eigen::MatrixXd lhs;    // np x draws: int_B |sum_J phi_J F_J|^p
  Eigen::MatrixXd child;  // np x D: int |F_J|^p w
};

// Shared-child-field evaluation. waves[J] is E_J of the base density; Phi (D x draws) holds per-draw child
// coefficients. Row blocks are independent tasks reduced in block order.
KernelOut run_kernel(const std::vector<PlaneWaves>& waves, const Eigen::MatrixXcd& Phi, const std::vector<double>& ps,
                     const Grid& grid, const NodeRange& lhs_range, const NodeRange& w_range, const SquareRegion& B,
                     const WeightKind& wk) {
  const auto D = static_cast<Eigen::Index>(waves.size());
  const Eigen::Index draws = Phi.cols(), np = static_cast<Eigen::Index>(ps.size());
  const Eigen::Index nx = grid.nx;
  const Eigen::VectorXd xs = grid.xs(), ys = grid.ys();

  double bytes = 0;
  for (const auto& w : waves) bytes += 16.0 * static_cast<double>(w.size()) * static_cast<double>(nx + grid.ny);
  bytes += 16.0 * kRowBlock * static_cast<double>(nx) * static_cast<double>(D + draws);
  if (bytes > 3.5e9) throw ResourceGuard("decoupling experiment exceeds the memory guard");

  std::vector<Eigen::MatrixXcd> At(D), Bm(D);
  for (Eigen::Index J = 0; J < D; ++J) {
    Eigen::MatrixXcd A = phase_matrix(xs, waves[J].f1);
    A *= waves[J].c.asDiagonal();
    At[J] = A.transpose();
    Bm[J] = phase_matrix(ys, waves[J].f2);
  }

  Eigen::VectorXd gxB = Eigen::VectorXd::Zero(nx), gyB = Eigen::VectorXd::Zero(grid.ny);
  Eigen::VectorXd gxW = Eigen::VectorXd::Zero(nx), gyW = Eigen::VectorXd::Zero(grid.ny);
  gxB.segment(lhs_range.i0, lhs_range.cols()) = gregory_weights(lhs_range.cols(), grid.spacing);
  gyB.segment(lhs_range.j0, lhs_range.rows()) = gregory_weights(lhs_range.rows(), grid.spacing_y);
  gxW.segment(w_range.i0, w_range.cols()) = gregory_weights(w_range.cols(), grid.spacing);
  gyW.segment(w_range.j0, w_range.rows()) = gregory_weights(w_range.rows(), grid.spacing_y);

  const Eigen::Index jlo = std::min(lhs_range.j0, w_range.j0), jhi = std::max(lhs_range.j1, w_range.j1);
  const Eigen::Index nblocks = (jhi - jlo + kRowBlock) / kRowBlock;
  std::vector<KernelOut> partial(nblocks);

  parallel_for(nblocks, [&](std::int64_t blk) {
    const Eigen::Index j0 = jlo + blk * kRowBlock;
    const Eigen::Index nb = std::min(kRowBlock, jhi + 1 - j0);
    KernelOut& out = partial[blk];
    out.lhs = Eigen::MatrixXd::Zero(np, draws);
    out.child = Eigen::MatrixXd::Zero(np, D);

    Eigen::MatrixXcd F(nb * nx, D);
    for (Eigen::Index J = 0; J < D; ++J) {
      Eigen::Map<FieldMatrix> M(F.col(J).data(), nb, nx);
      M.noalias() = Bm[J].middleRows(j0, nb) * At[J];
    }

    // weighted child integrals over w_range
    const Eigen::Index wr0 = std::max(j0, w_range.j0), wr1 = std::min(j0 + nb - 1, w_range.j1);
    if (wr0 <= wr1) {
      const Eigen::Index rows = wr1 - wr0 + 1, cols = w_range.cols();
      Eigen::ArrayXXd W(rows, cols);  // layout (row, col) matches the row-major field block
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double y = ys(wr0 + r);
        for (Eigen::Index c = 0; c < cols; ++c)
          W(r, c) = gyW(wr0 + r) * gxW(w_range.i0 + c) * evaluate_weight(wk, B, Point(xs(w_range.i0 + c), y));
      }
      for (Eigen::Index J = 0; J < D; ++J) {
        Eigen::Map<const FieldMatrix> M(F.col(J).data(), nb, nx);
        const Eigen::ArrayXXd a2 = M.block(wr0 - j0, w_range.i0, rows, cols).array().abs2();
        const Eigen::ArrayXXd logs = a2.log();
        for (Eigen::Index q = 0; q < np; ++q)
          out.child(q, J) = ps[q] == 2 ? (a2 * W).sum() : ((logs * (0.5 * ps[q])).exp() * W).sum();
      }
    }

    // combined fields over B
    const Eigen::Index br0 = std::max(j0, lhs_range.j0), br1 = std::min(j0 + nb - 1, lhs_range.j1);
    if (br0 <= br1) {
      const Eigen::Index rows = br1 - br0 + 1, cols = lhs_range.cols();
      Eigen::ArrayXXd W(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) W(r, c) = gyB(br0 + r) * gxB(lhs_range.i0 + c);
      const Eigen::MatrixXcd comb = F.middleRows((br0 - j0) * nx, rows * nx) * Phi;
      for (Eigen::Index d = 0; d < draws; ++d) {
        Eigen::Map<const FieldMatrix> M(comb.col(d).data(), rows, nx);
        const Eigen::ArrayXXd a2 = M.middleCols(lhs_range.i0, cols).array().abs2();
        const Eigen::ArrayXXd logs = a2.log();
        for (Eigen::Index q = 0; q < np; ++q)
          out.lhs(q, d) = ps[q] == 2 ? (a2 * W).sum() : ((logs * (0.5 * ps[q])).exp() * W).sum();
      }
    }
  });

  KernelOut total{Eigen::MatrixXd::Zero(np, draws), Eigen::MatrixXd::Zero(np, D)};
  for (const auto& part : partial) {
    total.lhs += part.lhs;
    total.child += part.child;
  }
  return total;
}

NodeRange weighted_range(const Grid& grid, const SquareRegion& B, double extent) {
  if (extent >= 1) return {0, grid.nx - 1, 0, grid.ny - 1};
  return node_range(grid, B.scaled(extent));
}

PlaneWaves waves_on(const DensityFunction& g, const Interval& J, const CurveSpec& curve, const std::vector<Point>& samples,
                    const QuadratureOptions& opts, double* err) {
  QuadratureRule r = build_rule(g, J, curve, samples, opts);
  if (err) *err = std::max(*err, r.estimated_error);
  return r.waves;
}

FieldMatrix field_on(const Grid& grid, const DensityFunction& g, const Interval& J, const CurveSpec& curve,
                     const QuadratureOptions& opts, double* err) {
  return evaluate_plane_waves(waves_on(g, J, curve, sample_points(grid), opts, err), grid.xs(), grid.ys());
}

// Averages (1/|Delta|) int |F|^q w~_Delta over the lattice of Delta centres, by separable contraction.
Eigen::MatrixXd local_averages(const FieldMatrix& F, const Grid& grid, const std::vector<SquareRegion>& tiles, Eigen::Index per_side,
                               double q, const WeightKind& wk) {
  if (wk.variant != WeightVariant::product_w_tilde) throw InvalidArgument("local averages need the product weight");
  const double r = tiles.front().side;
  Eigen::MatrixXd Ux(grid.nx, per_side), Uy(grid.ny, per_side);
  for (Eigen::Index a = 0; a < per_side; ++a) {
    const double cx = tiles[a].center.x(), cy = tiles[a * per_side].center.y();
    for (Eigen::Index i = 0; i < grid.nx; ++i) Ux(i, a) = weight_factor_1d(grid.x(i) - cx, r, wk.exponent);
    for (Eigen::Index j = 0; j < grid.ny; ++j) Uy(j, a) = weight_factor_1d(grid.y(j) - cy, r, wk.exponent);
  }
  const Eigen::VectorXd gx = gregory_weights(grid.nx, grid.spacing), gy = gregory_weights(grid.ny, grid.spacing_y);
  Eigen::MatrixXd Q = pow_from_abs2(F.array().abs2(), q).matrix();
  Q = gy.asDiagonal() * Q * gx.asDiagonal();
  // S(b, a): row index b along x2, column a along x1, matching tiles[b * per_side + a]
  return (Uy.transpose() * Q * Ux) / (r * r);
}

void check_separated(const Interval& I1, const Interval& I2, const Rational& nu) {
  if (I1.length() != nu || I2.length() != nu) throw InvalidArgument("intervals must have length nu");
  if (!(I1.lo / nu).is_integer() || !(I2.lo / nu).is_integer())
    throw InvalidArgument("intervals must belong to the partition P_nu([0,1])");
  if (I1.distance(I2) < nu) throw InvalidArgument("intervals " + I1.str() + " and " + I2.str() + " are not nu-separated");
}

}  // namespace

SquareRegion ExperimentSpec::square() const {
  if (B) return *B;
  const double inv = delta.inverse().to_double();
  return SquareRegion(Point::Zero(), inv * inv);
}

void ExperimentSpec::validate() const {
  if (!is_unit_fraction(delta)) throw InvalidArgument("delta must be 1/n for a positive integer n, got " + delta.str());
  if (!(p >= 2 && p <= 6)) throw InvalidArgument("p must lie in [2, 6], got " + std::to_string(p));
  if (!(curve.domain().length() / delta).is_integer()) throw InvalidArgument("delta must divide the curve domain");
  if (!(spacing > 0 && spacing <= 0.25)) throw InvalidArgument("grid spacing must lie in (0, 1/4]");
}

void BilinearSpec::validate() const {
  if (!is_unit_fraction(delta) || !is_unit_fraction(nu)) throw InvalidArgument("delta and nu must be unit fractions");
  if (b < 1) throw InvalidArgument("b must be >= 1");
  if (!(nu.pow(b) / delta).is_integer()) throw InvalidArgument("nu^b / delta must be an integer");
  if (!(p >= 2 && p <= 6)) throw InvalidArgument("p must lie in [2, 6]");
  check_separated(I, Iprime, nu);
}

double trivial_bound(const Rational& delta, double p, double exponent) {
  return std::exp2(exponent / p) / std::sqrt(delta.to_double());
}

std::vector<DensityFunction> random_phase_family(std::uint64_t seed, int draws, const Rational& scale) {
  std::vector<DensityFunction> fam;
  fam.reserve(draws);
  for (int d = 0; d < draws; ++d) fam.push_back(DensityFunction::random_phase(seed + static_cast<std::uint64_t>(d), scale));
  return fam;
}

std::vector<std::vector<RatioReport>> decoupling_ratios(const ExperimentSpec& spec, const std::vector<double>& ps) {
  spec.validate();
  if (ps.empty()) throw InvalidArgument("no p values requested");
  for (double p : ps)
    if (!(p >= 2 && p <= 6)) throw InvalidArgument("p must lie in [2, 6]");
  const SquareRegion B = spec.square();
  const auto children = spec.curve.domain().partition(spec.delta);
  const auto D = static_cast<Eigen::Index>(children.size());
  const double extent = choose_extent(spec.weight, 1.0);
  const Grid grid = Grid::covering(B, spec.spacing, std::max(1.0, extent));
  const NodeRange lhs_range = node_range(grid, B);
  const NodeRange w_range = weighted_range(grid, B, extent);
  const std::vector<Point> samples = sample_points(grid);
  const double tail_fraction = weight_tail_fraction(spec.weight, 1.0, extent / 2);

  const std::size_t M = spec.family.size();
  std::vector<std::vector<RatioReport>> out(ps.size(), std::vector<RatioReport>(M));

  auto fill = [&](std::size_t m, Eigen::Index col, const KernelOut& k, const std::vector<double>& child_sup,
                  const Eigen::MatrixXcd& Phi, std::int64_t xi_nodes, double qerr) {
    for (std::size_t q = 0; q < ps.size(); ++q) {
      const double p = ps[q];
      RatioReport& r = out[q][m];
      double rhs2 = 0, tail = 0;
      for (Eigen::Index J = 0; J < D; ++J) {
        const double a = std::abs(Phi(J, col));
        rhs2 += a * a * std::pow(k.child(q, J), 2 / p);
        tail += std::pow(a * child_sup[J], p);
      }
      r.lhs = std::pow(k.lhs(q, col), 1 / p);
      r.rhs = std::sqrt(rhs2);
      r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
      r.grid.tail_bound = tail_fraction * tail * 2 * M_PI * B.area() /
                          ((spec.weight.exponent - 1) * (spec.weight.exponent - 2));
      r.grid.xi_nodes = xi_nodes;
      r.grid.quadrature_error = qerr;
    }
  };

  // members constant on every child share one set of child fields
  std::vector<std::size_t> shared, generic;
  std::vector<std::vector<cdouble>> coeffs(M);
  for (std::size_t m = 0; m < M; ++m) {
    const auto& g = spec.family[m];
    if (g.is_zero()) continue;
    if (auto c = g.piecewise_constant_coefficients(children)) {
      coeffs[m] = std::move(*c);
      shared.push_back(m);
    } else {
      generic.push_back(m);
    }
  }

  if (!shared.empty()) {
    double qerr = 0;
    std::vector<PlaneWaves> waves;
    std::int64_t nodes = 0;
    for (const auto& J : children) {
      waves.push_back(waves_on(DensityFunction::constant(1.0, spec.curve.domain()), J, spec.curve, samples, spec.quadrature, &qerr));
      nodes += waves.back().size();
    }
    Eigen::MatrixXcd Phi(D, static_cast<Eigen::Index>(shared.size()));
    for (std::size_t s = 0; s < shared.size(); ++s)
      for (Eigen::Index J = 0; J < D; ++J) Phi(J, static_cast<Eigen::Index>(s)) = coeffs[shared[s]][J];
    const KernelOut k = run_kernel(waves, Phi, ps, grid, lhs_range, w_range, B, spec.weight);
    const std::vector<double> sup(D, spec.delta.to_double());
    for (std::size_t s = 0; s < shared.size(); ++s) fill(shared[s], static_cast<Eigen::Index>(s), k, sup, Phi, nodes, qerr);
  }
  for (std::size_t m : generic) {
    double qerr = 0;
    std::vector<PlaneWaves> waves;
    std::vector<double> sup;
    std::int64_t nodes = 0;
    for (const auto& J : children) {
      waves.push_back(waves_on(spec.family[m], J, spec.curve, samples, spec.quadrature, &qerr));
      sup.push_back(spec.family[m].l1_bound(J));
      nodes += waves.back().size();
    }
    const Eigen::MatrixXcd Phi = Eigen::MatrixXcd::Ones(D, 1);
    const KernelOut k = run_kernel(waves, Phi, ps, grid, lhs_range, w_range, B, spec.weight);
    fill(m, 0, k, sup, Phi, nodes, qerr);
  }

  for (std::size_t q = 0; q < ps.size(); ++q)
    for (std::size_t m = 0; m < M; ++m) {
      RatioReport& r = out[q][m];
      r.kind = "decoupling";
      r.label = spec.family[m].label();
      r.p = ps[q];
      r.delta = spec.delta.str();
      r.grid.spacing = grid.spacing;
      r.grid.nodes_per_side = grid.nx;
      r.grid.extent = extent;
      const double env = trivial_bound(spec.delta, ps[q], spec.weight.exponent) * 1.001;
      r.envelopes.push_back({"trivial_bound", env, r.ratio > env});
    }
  return out;
}

RatioReport decoupling_ratio(const ExperimentSpec& spec, const DensityFunction& g) {
  ExperimentSpec s = spec;
  s.family = {g};
  return decoupling_ratios(s, {spec.p}).front().front();
}

RatioReport max_ratio_over_family(const ExperimentSpec& spec) {
  if (spec.family.empty()) throw InvalidArgument("family must be nonempty");
  const auto rows = decoupling_ratios(spec, {spec.p}).front();
  std::size_t best = 0;
  for (std::size_t m = 1; m < rows.size(); ++m)
    if (rows[m].ratio > rows[best].ratio) best = m;
  return rows[best];
}

RatioReport bilinear_ratio(const BilinearSpec& spec, const DensityFunction& g) {
  spec.validate();
  const double inv = spec.delta.inverse().to_double();
  const SquareRegion B(Point::Zero(), inv * inv);
  const Rational nub = spec.nu.pow(spec.b);
  const double r = nub.inverse().to_double();
  const auto tiles = B.partition(r);
  const auto per_side = static_cast<Eigen::Index>(std::llround(B.side / r));

  RatioReport rep;
  rep.kind = "bilinear";
  rep.label = g.label();
  rep.p = spec.p;
  rep.delta = spec.delta.str();
  const double local_extent = choose_extent(spec.local_weight, 1.0);
  const double w_extent = choose_extent(spec.weight, 1.0);
  const double factor = std::max({1.0, 1 + (local_extent - 1) * r / B.side, w_extent});
  const Grid grid = Grid::covering(B, spec.spacing, factor);
  rep.grid.spacing = grid.spacing;
  rep.grid.nodes_per_side = grid.nx;
  rep.grid.extent = factor;
  if (g.is_zero()) return rep;

  double qerr = 0;
  double lhs_int = 0, rhs_int = 1;
  std::vector<Eigen::MatrixXd> S;
  for (const Interval* I : {&spec.I, &spec.Iprime}) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(per_side, per_side);
    for (const auto& J : I->partition(nub))
      acc += local_averages(field_on(grid, g, J, spec.curve, spec.quadrature, &qerr), grid, tiles, per_side, 2.0,
                            spec.local_weight);
    S.push_back(acc);
    double fine = 0;
    for (const auto& J : I->partition(spec.delta)) {
      SampledField F{grid, field_on(grid, g, J, spec.curve, spec.quadrature, &qerr), B};
      fine += std::pow(lp_norm(F, spec.p, NormMode::weighted(spec.weight, 1.0, true)), 2);
    }
    rhs_int *= std::pow(fine, spec.p / 4);
  }
  lhs_int = (S[0].array().pow(spec.p / 4) * S[1].array().pow(spec.p / 4)).mean();
  rep.lhs = std::pow(lhs_int, 1 / spec.p);
  rep.rhs = std::pow(rhs_int, 1 / spec.p);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  rep.grid.quadrature_error = qerr;
  rep.envelopes.push_back({"nu_in_definition_range", spec.nu_in_definition_range() ? 1.0 : 0.0, false});
  return rep;
}

RatioReport ball_inflation_ratio(int b, const Rational& nu, double p, const Interval& I1, const Interval& I2,
                                 const SquareRegion& delta_prime, const DensityFunction& g,
                                 const BallInflationOptions& opts) {
  if (b < 1) throw InvalidArgument("b must be >= 1");
  if (!is_unit_fraction(nu)) throw InvalidArgument("nu must be a unit fraction");
  if (!(p > 2)) throw InvalidArgument("ball inflation needs p > 2");
  check_separated(I1, I2, nu);
  const Rational nub = nu.pow(b);
  const double r = nub.inverse().to_double();
  if (std::abs(delta_prime.side - r * r) > 1e-9 * r * r) throw InvalidArgument("Delta' must have side nu^-2b");
  const auto tiles = delta_prime.partition(r);
  const auto per_side = static_cast<Eigen::Index>(std::llround(delta_prime.side / r));

  RatioReport rep;
  rep.kind = "ball_inflation";
  rep.label = g.label();
  rep.p = p;
  rep.delta = nu.str();
  const double ext = choose_extent(opts.weight, 1.0);
  const double factor = std::max({1.0, 1 + (ext - 1) * r / delta_prime.side, ext});
  const Grid grid = Grid::covering(delta_prime, opts.spacing, factor);
  rep.grid.spacing = grid.spacing;
  rep.grid.nodes_per_side = grid.nx;
  rep.grid.extent = factor;
  if (g.is_zero()) return rep;

  const double q = p / 2;
  double qerr = 0;
  Eigen::ArrayXXd local = Eigen::ArrayXXd::Ones(per_side, per_side);
  double global = 1;
  for (const Interval* I : {&I1, &I2}) {
    Eigen::ArrayXXd sum_sq = Eigen::ArrayXXd::Zero(per_side, per_side);
    double big = 0;
    for (const auto& J : I->partition(nub)) {
      const FieldMatrix F = field_on(grid, g, J, opts.curve, opts.quadrature, &qerr);
      sum_sq += local_averages(F, grid, tiles, per_side, q, opts.weight).array().pow(2 / q);
      SampledField sf{grid, F, delta_prime};
      big += std::pow(lp_norm(sf, q, NormMode::weighted(opts.weight, 1.0, true)), 2);
    }
    local *= sum_sq.pow(p / 4);
    global *= std::pow(big, p / 4);
  }
  const double factor_out = nu.inverse().to_double() * std::pow(std::log(r), p / 2);
  rep.lhs = local.mean();
  rep.rhs = factor_out * global;
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  rep.grid.quadrature_error = qerr;
  return rep;
}

ReductionReport reduction_consistency_check(const Rational& delta, const Rational& nu, double p,
                                            const std::vector<DensityFunction>& family, double spacing,
                                            const QuadratureOptions& quadrature) {
  if (!is_unit_fraction(delta) || !is_unit_fraction(nu)) throw InvalidArgument("delta and nu must be unit fractions");
  if (!(nu / delta).is_integer()) throw InvalidArgument("nu / delta must be an integer");
  if (!(p >= 2)) throw InvalidArgument("p must be >= 2");
  const double inv = delta.inverse().to_double();
  const SquareRegion B(Point::Zero(), inv * inv);
  const Grid grid = Grid::covering(B, spacing);
  const NodeRange nr = node_range(grid, B);
  const Eigen::VectorXd gx = gregory_weights(nr.cols(), grid.spacing), gy = gregory_weights(nr.rows(), grid.spacing_y);
  const Eigen::ArrayXXd W = (gy * gx.transpose()).array();
  const auto parts = Interval::unit().partition(nu);
  const double nu_inv = nu.inverse().to_double();

  ReductionReport rep;
  for (const auto& g : family) {
    ReductionRow row;
    row.label = g.label();
    if (g.is_zero()) {
      rep.rows.push_back(row);
      continue;
    }
    std::vector<Eigen::ArrayXXd> mag;  // |E_I g| over B
    FieldMatrix total = FieldMatrix::Zero(nr.rows(), nr.cols());
    for (const auto& I : parts) {
      const FieldMatrix F = field_on(grid, g, I, CurveSpec::parabola(1.0), quadrature, nullptr)
                                .block(nr.j0, nr.i0, nr.rows(), nr.cols());
      total += F;
      mag.push_back(F.array().abs());
    }
    row.lhs = std::pow((total.array().abs2().pow(p / 2) * W).sum(), 1 / p);
    std::vector<double> norms;
    for (const auto& m : mag) norms.push_back(std::pow((m.pow(p) * W).sum(), 1 / p));
    double near = 0, far = 0;
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::size_t c = 0; c < parts.size(); ++c) {
        if (parts[a].distance(parts[c]) < nu) {
          near += norms[a] * norms[c];
        } else {
          far = std::max(far, std::pow(((mag[a] * mag[c]).pow(p / 2) * W).sum(), 1 / p));
        }
      }
    row.near_term = std::sqrt(near);
    row.bilinear_term = nu_inv * far;
    const double denom = row.near_term + row.bilinear_term;
    row.constant = denom > 0 ? row.lhs / denom : 0.0;
    rep.max_constant = std::max(rep.max_constant, row.constant);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace declab
