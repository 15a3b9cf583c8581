#include "declab/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "declab/errors.hpp"
#include "declab/quadrature.hpp"

namespace declab {

cdouble unit_phase(double t) {
  const double r = t - std::round(t);
  const double a = 2 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

struct DensityFunction::Node {
  enum class Kind { zero, constant, random_phase, atoms, sum, pullback } kind = Kind::zero;
  Interval domain;
  cdouble value = 0.0;
  std::uint64_t seed = 0;
  Rational scale{1};
  std::vector<Atom> atoms;
  std::shared_ptr<const Node> a, b;
  double sigma = 1, shift = 0;
  // applied on top of the base representation
  cdouble factor = 1.0;
  double theta1 = 0, theta2 = 0;

  bool modulated() const { return theta1 != 0 || theta2 != 0; }
  cdouble decoration(double xi) const {
    cdouble f = factor;
    if (modulated()) f *= unit_phase(theta1 * xi + theta2 * xi * xi);
    return f;
  }
};

using Node = DensityFunction::Node;

namespace {

std::shared_ptr<Node> copy_of(const std::shared_ptr<const Node>& n) { return std::make_shared<Node>(*n); }

cdouble eval(const Node& n, double xi) {
  cdouble v = 0.0;
  switch (n.kind) {
    case Node::Kind::zero:
    case Node::Kind::atoms: return 0.0;
    case Node::Kind::constant: v = n.value; break;
    case Node::Kind::random_phase: {
      const double s = n.scale.to_double();
      const auto cells = (n.domain.length() / n.scale).num();
      auto k = static_cast<std::int64_t>(std::floor((xi - n.domain.lo_d()) / s));
      k = std::clamp<std::int64_t>(k, 0, cells - 1);
      v = unit_phase(unit_from_bits(mix64(n.seed ^ mix64(static_cast<std::uint64_t>(k)))));
      break;
    }
    case Node::Kind::sum: v = eval(*n.a, xi) + eval(*n.b, xi); break;
    case Node::Kind::pullback: v = eval(*n.a, n.sigma * xi + n.shift); break;
  }
  return v * n.decoration(xi);
}

void collect_atoms(const Node& n, double lo, double hi, bool closed_right, std::vector<Atom>& out) {
  const std::size_t start = out.size();
  switch (n.kind) {
    case Node::Kind::atoms:
      for (const auto& at : n.atoms)
        if ((at.location >= lo && at.location < hi) || (closed_right && at.location == hi)) out.push_back(at);
      break;
    case Node::Kind::sum:
      collect_atoms(*n.a, lo, hi, closed_right, out);
      collect_atoms(*n.b, lo, hi, closed_right, out);
      break;
    case Node::Kind::pullback: {
      std::vector<Atom> base;
      collect_atoms(*n.a, n.sigma * lo + n.shift, n.sigma * hi + n.shift, closed_right, base);
      for (auto at : base) {
        at.location = (at.location - n.shift) / n.sigma;
        at.mass /= n.sigma;
        out.push_back(at);
      }
      break;
    }
    default: break;
  }
  for (std::size_t i = start; i < out.size(); ++i) out[i].mass *= n.decoration(out[i].location);
}

bool has_continuous(const Node& n) {
  switch (n.kind) {
    case Node::Kind::constant: return n.value != 0.0 && n.factor != 0.0;
    case Node::Kind::random_phase: return n.factor != 0.0;
    case Node::Kind::sum: return has_continuous(*n.a) || has_continuous(*n.b);
    case Node::Kind::pullback: return n.factor != 0.0 && has_continuous(*n.a);
    default: return false;
  }
}

void collect_breaks(const Node& n, double lo, double hi, std::vector<double>& out) {
  switch (n.kind) {
    case Node::Kind::random_phase: {
      const double s = n.scale.to_double(), d0 = n.domain.lo_d();
      for (auto k = static_cast<std::int64_t>(std::ceil((lo - d0) / s)); d0 + k * s < hi; ++k) {
        const double x = d0 + k * s;
        if (x > lo) out.push_back(x);
      }
      break;
    }
    case Node::Kind::sum:
      collect_breaks(*n.a, lo, hi, out);
      collect_breaks(*n.b, lo, hi, out);
      break;
    case Node::Kind::pullback: {
      std::vector<double> base;
      collect_breaks(*n.a, n.sigma * lo + n.shift, n.sigma * hi + n.shift, base);
      for (double x : base) {
        const double y = (x - n.shift) / n.sigma;
        if (y > lo && y < hi) out.push_back(y);
      }
      break;
    }
    default: break;
  }
}

double rate(const Node& n, double lo, double hi) {
  double r = std::abs(n.theta1) + 2 * std::abs(n.theta2) * std::max(std::abs(lo), std::abs(hi));
  switch (n.kind) {
    case Node::Kind::sum: r += std::max(rate(*n.a, lo, hi), rate(*n.b, lo, hi)); break;
    case Node::Kind::pullback:
      r += n.sigma * rate(*n.a, n.sigma * lo + n.shift, n.sigma * hi + n.shift);
      break;
    default: break;
  }
  return r;
}

double sup_cont(const Node& n) {
  double s = 0;
  switch (n.kind) {
    case Node::Kind::constant: s = std::abs(n.value); break;
    case Node::Kind::random_phase: s = 1; break;
    case Node::Kind::sum: s = sup_cont(*n.a) + sup_cont(*n.b); break;
    case Node::Kind::pullback: s = sup_cont(*n.a); break;
    default: break;
  }
  return s * std::abs(n.factor);
}

bool any_modulation(const Node& n) {
  if (n.modulated()) return true;
  if (n.a && any_modulation(*n.a)) return true;
  if (n.b && any_modulation(*n.b)) return true;
  return false;
}

std::string describe(const Node& n) {
  std::ostringstream os;
  os.precision(12);
  switch (n.kind) {
    case Node::Kind::zero: os << "zero"; break;
    case Node::Kind::constant:
      os << "const(" << n.value.real();
      if (n.value.imag() != 0) os << (n.value.imag() > 0 ? "+" : "") << n.value.imag() << "i";
      os << ")";
      break;
    case Node::Kind::random_phase: os << "random(seed=" << n.seed << ",scale=" << n.scale.str() << ")"; break;
    case Node::Kind::atoms: os << "atoms(n=" << n.atoms.size() << ")"; break;
    case Node::Kind::sum: os << "(" << describe(*n.a) << "+" << describe(*n.b) << ")"; break;
    case Node::Kind::pullback: os << "pullback(" << describe(*n.a) << ",sigma=" << n.sigma << ",a=" << n.shift << ")"; break;
  }
  if (n.factor != 1.0) os << "*(" << n.factor.real() << "," << n.factor.imag() << ")";
  if (n.modulated()) os << "*e(" << n.theta1 << "x+" << n.theta2 << "x^2)";
  return os.str();
}

}  // namespace

DensityFunction::DensityFunction() : node_(std::make_shared<Node>()) {}

DensityFunction DensityFunction::zero() { return DensityFunction(); }

DensityFunction DensityFunction::constant(cdouble c, Interval domain) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = c;
  n->domain = domain;
  return DensityFunction(n);
}

DensityFunction DensityFunction::random_phase(std::uint64_t seed, const Rational& scale, Interval domain) {
  if (!(scale > Rational(0))) throw InvalidArgument("random phase scale must be positive");
  if (!(domain.length() / scale).is_integer()) throw InvalidArgument("random phase scale must divide the domain");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::random_phase;
  n->seed = seed;
  n->scale = scale;
  n->domain = domain;
  return DensityFunction(n);
}

DensityFunction DensityFunction::atom_sum(std::vector<std::pair<double, double>> atoms, Interval domain) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::atoms;
  n->domain = domain;
  for (auto [x, m] : atoms) {
    if (!(m > 0)) throw InvalidArgument("atom masses must be positive");
    if (!domain.contains(x)) throw InvalidArgument("atom outside the density domain");
    n->atoms.push_back({x, m});
  }
  return DensityFunction(n);
}

DensityFunction DensityFunction::operator+(const DensityFunction& other) const {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::sum;
  n->domain = node_->domain;
  n->a = node_;
  n->b = other.node_;
  return DensityFunction(n);
}

DensityFunction DensityFunction::scaled(cdouble factor) const {
  auto n = copy_of(node_);
  n->factor *= factor;
  return DensityFunction(n);
}

DensityFunction DensityFunction::modulated(double theta1, double theta2) const {
  if (node_->modulated()) {
    // keep one modulation per node: wrap first
    auto w = std::make_shared<Node>();
    w->kind = Node::Kind::pullback;
    w->domain = node_->domain;
    w->a = node_;
    w->theta1 = theta1;
    w->theta2 = theta2;
    return DensityFunction(w);
  }
  auto n = copy_of(node_);
  n->theta1 = theta1;
  n->theta2 = theta2;
  return DensityFunction(n);
}

DensityFunction DensityFunction::pullback(double sigma, double a) const {
  if (!(sigma > 0)) throw InvalidArgument("pullback needs sigma > 0");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::pullback;
  n->a = node_;
  n->sigma = sigma;
  n->shift = a;
  return DensityFunction(n);
}

bool DensityFunction::is_zero() const {
  if (node_->kind == Node::Kind::zero || node_->factor == 0.0) return true;
  return !has_continuous(*node_) && atoms_in(-1e300, 1e300, true).empty();
}

const Interval& DensityFunction::domain() const { return node_->domain; }

cdouble DensityFunction::operator()(double xi) const { return eval(*node_, xi); }

std::vector<Atom> DensityFunction::atoms_in(const Interval& J) const {
  return atoms_in(J.lo_d(), J.hi_d(), J.hi == node_->domain.hi);
}

std::vector<Atom> DensityFunction::atoms_in(double lo, double hi, bool closed_right) const {
  std::vector<Atom> out;
  collect_atoms(*node_, lo, hi, closed_right, out);
  return out;
}

bool DensityFunction::has_continuous_part() const { return has_continuous(*node_); }

std::vector<double> DensityFunction::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  collect_breaks(*node_, lo, hi, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [&](double x, double y) { return std::abs(x - y) <= 1e-14 * (hi - lo); }),
            out.end());
  return out;
}

double DensityFunction::phase_rate(double lo, double hi) const { return rate(*node_, lo, hi); }

double DensityFunction::sup_abs_continuous() const { return sup_cont(*node_); }

double DensityFunction::l1_bound(const Interval& J) const {
  double s = sup_abs_continuous() * J.length().to_double();
  for (const auto& at : atoms_in(J)) s += std::abs(at.mass);
  return s;
}

std::optional<std::vector<cdouble>> DensityFunction::piecewise_constant_coefficients(
    const std::vector<Interval>& children) const {
  if (any_modulation(*node_)) return std::nullopt;
  std::vector<cdouble> out;
  out.reserve(children.size());
  for (const auto& J : children) {
    if (!atoms_in(J).empty()) return std::nullopt;
    if (!breakpoints(J.lo_d(), J.hi_d()).empty()) return std::nullopt;
    out.push_back((*this)(0.5 * (J.lo_d() + J.hi_d())));
  }
  return out;
}

std::string DensityFunction::label() const { return describe(*node_); }

}  // namespace declab
