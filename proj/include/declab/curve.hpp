#pragma once

#include <functional>
#include <memory>
#include <string>

#include "declab/geometry_weights.hpp"

namespace declab {

// Phase curve xi -> h(xi) on a parameter interval.
class CurveSpec {
 public:
  enum class Kind { parabola, circle_arc, scaled_circle, tabulated };
  using Fn = std::function<double(double)>;

  CurveSpec();  // parabola with a = 1 on [0, 1]

  static CurveSpec parabola(double a = 1.0);
  // h(t) = 1 - sqrt(1 - t^2) on [0, tau], tau < 1
  static CurveSpec circle_arc(const Rational& tau);
  // H(xi) = (1 - sqrt(1 - xi^2 tau0^2)) / tau0^2 on [0, 1]
  static CurveSpec scaled_circle(const Rational& tau0);
  static CurveSpec tabulated(Fn h, Fn dh, Fn d2h, Interval domain = Interval::unit(), std::string label = "tabulated");

  Kind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  double parameter() const { return param_; }  // a, tau or tau0
  std::string label() const;

  double h(double t) const;
  double dh(double t) const;
  double d2h(double t) const;
  double max_abs_slope(const Interval& J) const;

  // h(0) = h'(0) = 0, h'''(0) = 0 (by symmetric difference of h'') and 1/2 <= h'' <= 2 on samples.
  bool certify_class_c(int samples = 1025) const;

 private:
  Kind kind_ = Kind::parabola;
  double param_ = 1.0;
  Interval domain_;
  std::shared_ptr<const Fn> h_, dh_, d2h_;
  std::string label_;
};

}  // namespace declab
