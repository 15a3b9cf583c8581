#include "declab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "declab/errors.hpp"

namespace declab {

CurveSpec::CurveSpec() = default;

CurveSpec CurveSpec::parabola(double a) {
  if (!(a >= 0.01 && a <= 100)) throw InvalidArgument("parabola coefficient must lie in [1/100, 100]");
  CurveSpec c;
  c.kind_ = Kind::parabola;
  c.param_ = a;
  return c;
}

CurveSpec CurveSpec::circle_arc(const Rational& tau) {
  if (!(Rational(0) < tau && tau < Rational(1))) throw InvalidArgument("circle arc needs 0 < tau < 1");
  CurveSpec c;
  c.kind_ = Kind::circle_arc;
  c.param_ = tau.to_double();
  c.domain_ = Interval(Rational(0), tau);
  return c;
}

CurveSpec CurveSpec::scaled_circle(const Rational& tau0) {
  if (!(Rational(0) < tau0 && tau0 < Rational(1))) throw InvalidArgument("scaled circle needs 0 < tau0 < 1");
  CurveSpec c;
  c.kind_ = Kind::scaled_circle;
  c.param_ = tau0.to_double();
  return c;
}

CurveSpec CurveSpec::tabulated(Fn h, Fn dh, Fn d2h, Interval domain, std::string label) {
  if (!h || !dh || !d2h) throw InvalidArgument("tabulated curve needs h, h' and h''");
  CurveSpec c;
  c.kind_ = Kind::tabulated;
  c.domain_ = domain;
  c.h_ = std::make_shared<const Fn>(std::move(h));
  c.dh_ = std::make_shared<const Fn>(std::move(dh));
  c.d2h_ = std::make_shared<const Fn>(std::move(d2h));
  c.label_ = std::move(label);
  return c;
}

std::string CurveSpec::label() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::parabola: os << "parabola(" << param_ << ")"; break;
    case Kind::circle_arc: os << "circle_arc(" << domain_.hi.str() << ")"; break;
    case Kind::scaled_circle: os << "scaled_circle(" << param_ << ")"; break;
    case Kind::tabulated: os << label_; break;
  }
  return os.str();
}

double CurveSpec::h(double t) const {
  switch (kind_) {
    case Kind::parabola: return param_ * t * t;
    case Kind::circle_arc: return t * t / (1 + std::sqrt(1 - t * t));
    case Kind::scaled_circle: {
      // (1 - sqrt(1 - u))/tau0^2 with u = xi^2 tau0^2, written without cancellation
      const double u = t * t * param_ * param_;
      return t * t / (1 + std::sqrt(1 - u));
    }
    case Kind::tabulated: return (*h_)(t);
  }
  return 0;
}

double CurveSpec::dh(double t) const {
  switch (kind_) {
    case Kind::parabola: return 2 * param_ * t;
    case Kind::circle_arc: return t / std::sqrt(1 - t * t);
    case Kind::scaled_circle: return t / std::sqrt(1 - t * t * param_ * param_);
    case Kind::tabulated: return (*dh_)(t);
  }
  return 0;
}

double CurveSpec::d2h(double t) const {
  switch (kind_) {
    case Kind::parabola: return 2 * param_;
    case Kind::circle_arc: return std::pow(1 - t * t, -1.5);
    case Kind::scaled_circle: return std::pow(1 - t * t * param_ * param_, -1.5);
    case Kind::tabulated: return (*d2h_)(t);
  }
  return 0;
}

double CurveSpec::max_abs_slope(const Interval& J) const {
  const double lo = J.lo_d(), hi = J.hi_d();
  switch (kind_) {
    case Kind::parabola:
    case Kind::circle_arc:
    case Kind::scaled_circle:
      // |h'| is monotone in |t| for these
      return std::max(std::abs(dh(lo)), std::abs(dh(hi)));
    case Kind::tabulated: {
      double m = 0;
      for (int k = 0; k <= 256; ++k) m = std::max(m, std::abs(dh(lo + (hi - lo) * k / 256.0)));
      return 1.1 * m;
    }
  }
  return 0;
}

bool CurveSpec::certify_class_c(int samples) const {
  const double tol = 1e-9;
  if (std::abs(h(0)) > tol || std::abs(dh(0)) > tol) return false;
  const double eps = 1e-4;
  if (std::abs(d2h(eps) - d2h(-eps)) / (2 * eps) > 1e-5) return false;
  const double lo = domain_.lo_d(), hi = domain_.hi_d();
  for (int k = 0; k < samples; ++k) {
    const double v = d2h(lo + (hi - lo) * k / (samples - 1.0));
    if (!(v >= 0.5 - tol && v <= 2 + tol)) return false;
  }
  return true;
}

}  // namespace declab
