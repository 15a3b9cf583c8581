#include <doctest.h>

#include <cmath>

#include "declab/errors.hpp"
#include "declab/extension_ops.hpp"
#include "declab/quadrature.hpp"
#include "frozen.hpp"

using namespace declab;

namespace {

const CurveSpec kParabola = CurveSpec::parabola(1.0);

// midpoint rule for int_0^1 e(xi x1 + xi^2 x2)
cdouble riemann_oracle(const Point& x, int n) {
  cdouble s = 0;
  for (int k = 0; k < n; ++k) {
    const double xi = (k + 0.5) / n;
    const double ph = 2 * M_PI * (xi * x.x() + xi * xi * x.y());
    s += cdouble(std::cos(ph), std::sin(ph));
  }
  return s / static_cast<double>(n);
}

SampledField tabulate(Point origin, double h, Eigen::Index n, const std::function<cdouble(double, double)>& f) {
  SampledField out;
  out.grid.origin = origin;
  out.grid.spacing = out.grid.spacing_y = h;
  out.grid.nx = out.grid.ny = n;
  out.values.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out.values(j, i) = f(out.grid.x(i), out.grid.y(j));
  const double side = h * static_cast<double>(n - 1);
  out.square = SquareRegion(origin + Point(side / 2, side / 2), side);
  return out;
}

double max_abs_diff(const FieldMatrix& a, const FieldMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("extension of g = 1 at the documented points") {
  const auto one = DensityFunction::constant(1.0);
  for (const auto& curve : {kParabola, CurveSpec::circle_arc(Rational(1, 2)), CurveSpec::scaled_circle(Rational(1, 8))}) {
    const Interval dom = curve.domain();
    const double len = dom.length().to_double();
    CHECK(std::abs(extension_at(one, dom, curve, Point(0, 0)) - len) < 1e-12);
  }
  for (double x1 : {0.3, -2.5, 7.0}) {
    const cdouble expect = (unit_phase(x1) - 1.0) / (cdouble(0, 2 * M_PI) * x1);
    CHECK(std::abs(extension_at(one, Interval::unit(), kParabola, Point(x1, 0)) - expect) < 1e-12);
  }
  const cdouble oracle = riemann_oracle(Point(0.5, 1.0 / 3), 1000000);
  CHECK(std::abs(extension_at(one, Interval::unit(), kParabola, Point(0.5, 1.0 / 3)) - oracle) < 1e-7);
}

TEST_CASE("gridded extension agrees with pointwise evaluation") {
  const auto g = DensityFunction::random_phase(3, Rational(1, 8));
  const SquareRegion B(Point(1, -2), 8);
  const SampledField F = evaluate_extension(g, Interval::unit(), kParabola, B, 0.25);
  for (Eigen::Index k = 0; k < 20; ++k) {
    const auto i = static_cast<Eigen::Index>(mix64(2 * k) % static_cast<std::uint64_t>(F.grid.nx));
    const auto j = static_cast<Eigen::Index>(mix64(2 * k + 1) % static_cast<std::uint64_t>(F.grid.ny));
    CHECK(std::abs(F.at(i, j) - extension_at(g, Interval::unit(), kParabola, F.grid.node(i, j))) < 1e-9);
  }
  CHECK_THROWS_AS(evaluate_extension(g, Interval::unit(), kParabola, B, 0.5), InvalidArgument);
}

TEST_CASE("atom sums are exact exponential sums") {
  const auto g = DensityFunction::atom_sum({{0.25, 1.0}, {0.75, 2.0}});
  const Point x(1.3, -0.7);
  const cdouble expect = unit_phase(0.25 * x.x() + 0.0625 * x.y()) + 2.0 * unit_phase(0.75 * x.x() + 0.5625 * x.y());
  CHECK(std::abs(extension_at(g, Interval::unit(), kParabola, x) - expect) < 1e-12);
}

TEST_CASE("lp_norm examples") {
  const SquareRegion B(Point(0, 0), 4);
  SampledField ones = tabulate(Point(-2, -2), 0.25, 17, [](double, double) { return cdouble(1); });
  for (double p : {1.0, 2.0, 4.5, 6.0, kInfinity}) CHECK(lp_norm(ones, p, NormMode::normalized()) == doctest::Approx(1));
  CHECK(lp_norm(ones, 2, NormMode::plain()) == doctest::Approx(4));
  CHECK_THROWS_AS(lp_norm(ones, 0.5, NormMode::plain()), InvalidArgument);

  const auto atom = DensityFunction::atom_sum({{0.3, 1.0}});
  const SampledField F = evaluate_extension(atom, Interval::unit(), kParabola, B, 0.25);
  CHECK(lp_norm(F, 6, NormMode::normalized()) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("normalized norms are monotone in p") {
  const auto g = DensityFunction::random_phase(9, Rational(1, 4));
  const SampledField F = evaluate_extension(g, Interval::unit(), kParabola, SquareRegion(Point(0, 0), 8), 0.25);
  double last = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 10.0, kInfinity}) {
    const double v = lp_norm(F, p, NormMode::normalized());
    CHECK(v >= last * (1 - 1e-12));
    last = v;
  }
}

TEST_CASE("modulation translates the field") {
  const auto g = DensityFunction::random_phase(5, Rational(1, 8));
  const double theta = 2.0;
  const SquareRegion B(Point(0.5, 0), 8);
  const SampledField Fm = evaluate_extension(g.modulated(theta), Interval::unit(), kParabola, B, 0.25);
  const SampledField Ft = evaluate_extension(g, Interval::unit(), kParabola, B.translated(Point(theta, 0)), 0.25);
  CHECK(max_abs_diff(Fm.values, Ft.values) < 1e-8);
  for (double p : {2.0, 5.0}) {
    const double a = lp_norm(Fm, p, NormMode::normalized()), b = lp_norm(Ft, p, NormMode::normalized());
    CHECK(std::abs(a - b) <= 1e-8 * b);
  }
}

TEST_CASE("extension is linear in g") {
  const auto g1 = DensityFunction::constant(cdouble(0.3, -1));
  const auto g2 = DensityFunction::random_phase(21, Rational(1, 16));
  const auto g3 = DensityFunction::atom_sum({{0.1, 0.5}});
  const SquareRegion B(Point(-3, 4), 8);
  const auto E = [&](const DensityFunction& g) { return evaluate_extension(g, Interval::unit(), kParabola, B, 0.25).values; };
  const FieldMatrix sum = E(g1 + g2 + g3.scaled(cdouble(0, 2)));
  const FieldMatrix parts = E(g1) + E(g2) + cdouble(0, 2) * E(g3);
  CHECK(max_abs_diff(sum, parts) < 1e-10);
}

TEST_CASE("halving the spacing barely moves reported norms") {
  const auto g = DensityFunction::random_phase(2, Rational(1, 8));
  const SquareRegion B(Point(0, 0), 8);
  const SampledField A = evaluate_extension(g, Interval::unit(), kParabola, B, 0.125);
  const SampledField H = evaluate_extension(g, Interval::unit(), kParabola, B, 0.0625);
  for (double p : {2.0, 4.0, 6.0}) {
    const double a = lp_norm(A, p, NormMode::normalized()), h = lp_norm(H, p, NormMode::normalized());
    CHECK(std::abs(a - h) <= 1e-6 * h);
  }
}

TEST_CASE("parabolic rescaling identity") {
  const auto one = DensityFunction::constant(1.0);
  const SquareRegion B16(Point(0, 0), 16);
  CHECK(parabolic_rescale_identity_check(one, Interval::unit(), 4, B16, 0.25) < 1e-12);
  CHECK(parabolic_rescale_identity_check(one, Interval(Rational(1, 2), Rational(1)), 4, B16, 0.25) < 1e-5);
  const auto g = DensityFunction::random_phase(7, Rational(1, 16));
  CHECK(parabolic_rescale_identity_check(g, Interval(Rational(1, 4), Rational(1, 2)), 5, B16, 0.25) < 1e-4);
}

TEST_CASE("parabolic rescaling deviation shrinks under refinement") {
  const auto one = DensityFunction::constant(1.0);
  const Interval I(Rational(1, 2), Rational(1));
  const SquareRegion B(Point(0, 0), 16);
  const double coarse = parabolic_rescale_identity_check(one, I, 4, B, 0.25);
  const double fine = parabolic_rescale_identity_check(one, I, 4, B, 0.125);
  CHECK((fine <= coarse / 2 || fine < 1e-13));
}

TEST_CASE("anisotropic rescaling identity") {
  const SampledField gauss =
      tabulate(Point(-6, -6), 0.0625, 193, [](double x, double y) { return cdouble(std::exp(-(x * x + y * y))); });
  CHECK(anisotropic_rescale_identity_check(1, 3, gauss) == 0);
  CHECK(anisotropic_rescale_identity_check(2, 2, gauss) < 1e-6);
  // closed form: int exp(-2|x|^2) = pi / 2, and r^(1/2 - 1) ||f_r||_2 should reproduce its root
  const SampledField r2 = anisotropic_rescale(gauss, 2);
  double acc = 0;
  for (Eigen::Index j = 0; j < r2.grid.ny; ++j)
    for (Eigen::Index i = 0; i < r2.grid.nx; ++i) acc += std::norm(r2.values(j, i));
  acc *= r2.grid.spacing * r2.grid.spacing_y;
  CHECK(std::abs(std::sqrt(acc / 2) - std::sqrt(M_PI / 2)) < 1e-6);

  const auto g = DensityFunction::random_phase(4, Rational(1, 8));
  const SampledField F = evaluate_extension(g, Interval::unit(), kParabola, SquareRegion(Point(0, 0), 8), 0.0625);
  CHECK(anisotropic_rescale_identity_check(1.0 / 3, 5, F) < 1e-5);
}

TEST_CASE("reverse Holder ratios") {
  const Interval J(Rational(0), Rational(1, 8));
  const SquareRegion B(Point(0, 0), 8);
  CHECK(reverse_holder_ratio(DensityFunction::zero(), J, 2, 4, B) == 0);
  const auto one = DensityFunction::constant(1.0);
  const double r4 = reverse_holder_ratio(one, J, 2, 4, B);
  CHECK(std::isfinite(r4));
  CHECK(r4 <= frozen::value("extension.reverse_holder_2_4", r4) * 1.05);
  const double rinf = reverse_holder_ratio(one, J, 2, kInfinity, B);
  CHECK(std::isfinite(rinf));
  CHECK(rinf <= frozen::value("extension.reverse_holder_2_inf", rinf) * 1.05);
  CHECK_THROWS_AS(reverse_holder_ratio(one, J, 2, 4, SquareRegion(Point(0, 0), 4)), InvalidArgument);
}

TEST_CASE("l2 decoupling ratios") {
  const SquareRegion B(Point(0, 0), 8);
  const auto g = DensityFunction::random_phase(12, Rational(1, 8));
  CHECK(l2_decoupling_ratio(g, Interval(Rational(0), Rational(1, 8)), B) == doctest::Approx(1).epsilon(1e-12));
  const double r = l2_decoupling_ratio(g, Interval::unit(), B);
  CHECK(r <= frozen::value("extension.l2_random_R8", r) * 1.05);

  std::vector<std::pair<double, double>> atoms;
  for (int k = 0; k < 8; ++k) atoms.push_back({(k + 0.5) / 8, 1.0});
  const double ra = l2_decoupling_ratio(DensityFunction::atom_sum(atoms), Interval::unit(), B);
  CHECK(ra <= frozen::value("extension.l2_atoms_R8", ra) * 1.05);
  // the constant grows with the weight exponent; near orthogonality only shows for slow weights
  double last = 1;
  for (double e : {3.0, 6.0, 100.0}) {
    const double re = l2_decoupling_ratio(DensityFunction::atom_sum(atoms), Interval::unit(), B, 0.25, {WeightVariant::radial_w, e});
    CHECK(re >= last);
    last = re;
  }
  const double r3 = l2_decoupling_ratio(DensityFunction::atom_sum(atoms), Interval::unit(), B, 0.25, {WeightVariant::radial_w, 3});
  CHECK(r3 <= frozen::value("extension.l2_atoms_R8_e3", r3) * 1.05);
  CHECK_THROWS_AS(l2_decoupling_ratio(g, Interval::unit(), SquareRegion(Point(0, 0), 7.5)), InvalidArgument);
}
