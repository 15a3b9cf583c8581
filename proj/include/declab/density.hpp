#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "declab/geometry_weights.hpp"

namespace declab {

using cdouble = std::complex<double>;

// e(t) = exp(2 pi i t), with t reduced mod 1 before the trig calls.
cdouble unit_phase(double t);

struct Atom {
  double location = 0;
  cdouble mass = 1.0;
};

// Density g on a parameter interval: a continuous part plus finitely many point masses.
class DensityFunction {
 public:
  DensityFunction();  // zero

  static DensityFunction zero();
  static DensityFunction constant(cdouble c, Interval domain = Interval::unit());
  // Unit phase e(u_k) on the k-th cell of width `scale`, u_k derived from (seed, k).
  static DensityFunction random_phase(std::uint64_t seed, const Rational& scale, Interval domain = Interval::unit());
  // Masses must be positive reals; use scaled() for complex amplitudes.
  static DensityFunction atom_sum(std::vector<std::pair<double, double>> atoms, Interval domain = Interval::unit());

  DensityFunction operator+(const DensityFunction& other) const;
  DensityFunction scaled(cdouble factor) const;
  // g(xi) * e(theta1 xi + theta2 xi^2)
  DensityFunction modulated(double theta1, double theta2 = 0) const;
  // g_a(eta) = g(sigma eta + a). Atoms move to (x - a)/sigma with mass m/sigma, so that
  // sigma * E_[0,1] g_a(Tx) and E_[a,a+sigma] g(x) agree up to a unimodular factor.
  DensityFunction pullback(double sigma, double a) const;

  bool is_zero() const;
  const Interval& domain() const;

  // Continuous part at xi.
  cdouble operator()(double xi) const;
  // Point masses in J: lo <= x < hi, plus x == hi when J ends at the domain's right end.
  std::vector<Atom> atoms_in(const Interval& J) const;
  std::vector<Atom> atoms_in(double lo, double hi, bool closed_right) const;
  bool has_continuous_part() const;
  // Points where the continuous part may jump, strictly inside (lo, hi).
  std::vector<double> breakpoints(double lo, double hi) const;
  // Bound on |d/dxi arg g| / 2pi on [lo, hi] from modulations.
  double phase_rate(double lo, double hi) const;
  double sup_abs_continuous() const;
  // Upper bound on int_J |g| including atoms.
  double l1_bound(const Interval& J) const;
  // If g is constant on every child (no atoms, no modulation inside), those constants.
  std::optional<std::vector<cdouble>> piecewise_constant_coefficients(const std::vector<Interval>& children) const;

  std::string label() const;

  struct Node;

 private:
  explicit DensityFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace declab
