#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "declab/curve.hpp"
#include "declab/density.hpp"
#include "declab/extension_ops.hpp"
#include "declab/geometry_weights.hpp"

namespace declab {

struct ExperimentSpec {
  Rational delta{1, 4};
  double p = 5.0;
  CurveSpec curve = CurveSpec::parabola(1.0);
  std::optional<SquareRegion> B;  // default B(0, delta^-2)
  std::vector<DensityFunction> family;
  double spacing = 0.25;
  WeightKind weight{};
  QuadratureOptions quadrature{};

  SquareRegion square() const;
  void validate() const;
};

struct BilinearSpec {
  Rational delta{1, 16};
  Rational nu{1, 4};
  int b = 1;
  Interval I{Rational(0), Rational(1, 4)};
  Interval Iprime{Rational(1, 2), Rational(3, 4)};
  double p = 5.0;
  CurveSpec curve = CurveSpec::parabola(1.0);
  double spacing = 0.25;
  WeightKind weight{};                                          // w_B on the right
  WeightKind local_weight{WeightVariant::product_w_tilde, 100};  // w~_Delta on the left
  QuadratureOptions quadrature{};

  // The (nu < 1/100) condition of the definition is reported, not enforced: desk scales use nu = 1/4.
  bool nu_in_definition_range() const { return nu < Rational(1, 100); }
  void validate() const;
};

struct EnvelopeRef {
  std::string name;
  double value = 0;
  bool exceeded = false;
  friend bool operator==(const EnvelopeRef&, const EnvelopeRef&) = default;
};

struct GridDiagnostics {
  double spacing = 0;
  std::int64_t nodes_per_side = 0;
  std::int64_t xi_nodes = 0;
  double extent = 1;
  double tail_bound = 0;
  double quadrature_error = 0;
  friend bool operator==(const GridDiagnostics&, const GridDiagnostics&) = default;
};

struct RatioReport {
  std::string kind;   // decoupling, bilinear, ball_inflation
  std::string label;  // density identifier
  double p = 0;
  std::string delta;
  double lhs = 0, rhs = 0, ratio = 0;
  GridDiagnostics grid;
  std::vector<EnvelopeRef> envelopes;
  friend bool operator==(const RatioReport&, const RatioReport&) = default;
};

// 2^(e/p) delta^(-1/2)
double trivial_bound(const Rational& delta, double p, double exponent = 100.0);

RatioReport decoupling_ratio(const ExperimentSpec& spec, const DensityFunction& g);
// One report per (p, member), rows ordered by p then family index. Family members that are constant on every
// delta-child share the child fields, so large random-phase families cost little more than one member.
std::vector<std::vector<RatioReport>> decoupling_ratios(const ExperimentSpec& spec, const std::vector<double>& ps);
RatioReport max_ratio_over_family(const ExperimentSpec& spec);

std::vector<DensityFunction> random_phase_family(std::uint64_t seed, int draws, const Rational& scale);

RatioReport bilinear_ratio(const BilinearSpec& spec, const DensityFunction& g);

struct BallInflationOptions {
  double spacing = 0.25;
  CurveSpec curve = CurveSpec::parabola(1.0);
  WeightKind weight{WeightVariant::product_w_tilde, 100};
  QuadratureOptions quadrature{};
};

RatioReport ball_inflation_ratio(int b, const Rational& nu, double p, const Interval& I1, const Interval& I2,
                                 const SquareRegion& delta_prime, const DensityFunction& g,
                                 const BallInflationOptions& opts = {});

struct ReductionRow {
  std::string label;
  double lhs = 0;
  double near_term = 0;      // (sum over near pairs of |E_I g|_p |E_I' g|_p)^(1/2)
  double bilinear_term = 0;  // nu^-1 max over far pairs of | |E_I g E_I' g|^(1/2) |_p
  double constant = 0;       // lhs / (near + bilinear)
};

struct ReductionReport {
  std::vector<ReductionRow> rows;
  double max_constant = 0;
  bool consistent(double C) const { return max_constant <= C; }
};

ReductionReport reduction_consistency_check(const Rational& delta, const Rational& nu, double p,
                                            const std::vector<DensityFunction>& family, double spacing = 0.25,
                                            const QuadratureOptions& quadrature = {});

}  // namespace declab
