#include "declab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "declab/errors.hpp"

namespace declab {

namespace {

void check_open_p(double p) {
  if (!(p > 4 && p < 6)) throw InvalidArgument("p must lie in (4, 6)");
}

void check_closed_p(double p) {
  if (!(p >= 4 && p <= 6)) throw InvalidArgument("p must lie in [4, 6]");
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

bool same_scale(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

Scale Scale::from_delta(double delta) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("delta must lie in (0, 1)");
  return {-std::log(delta)};
}

Scale Scale::from_log_inv(double L) {
  if (!(L > 0) || !std::isfinite(L)) throw InvalidArgument("log(1/delta) must be positive and finite");
  return {L};
}

Scale Scale::from_log2_inv(double bits) { return from_log_inv(bits * std::numbers::ln2); }

double Scale::delta() const { return std::exp(-log_inv); }
double Scale::log2_inv() const { return log_inv / std::numbers::ln2; }

double alpha(double p) { return (p - 4) / (p - 2); }
double sigma_p(double p) { return 0.25 * (1 - std::log2((p - 2) / 2)); }
double theorem_exponent(double p) { return 0.75 + 0.25 * std::log2((p - 2) / 2); }

ExponentProfile exponent_profile(double p) { return {p, alpha(p), sigma_p(p), theorem_exponent(p)}; }

double theorem_bound_log(Scale delta, double p, double C) {
  check_open_p(p);
  if (!(delta.log_inv > 1)) throw InvalidArgument("theorem bound needs delta < 1/e");
  return C * std::pow(delta.log_inv, theorem_exponent(p)) * std::log(delta.log_inv);
}

double geometric_sum(int N, double p) {
  const double r = 2 / (p - 2);
  if (r == 1) return N + 1;
  return (1 - std::pow(r, N + 1)) / (1 - r);
}

double product_exponent_sum(int N, double p) {
  const double r = 2 / (p - 2), a = alpha(p);
  double s = 0;
  for (int j = 0; j <= N; ++j) s += a * std::pow(r, N - j);
  return s;
}

double product_exponent_closed(int N, double p) { return 1 - std::pow(2 / (p - 2), N + 1); }

const double* BoundLedger::find(Scale s) const {
  auto it = entries.lower_bound(s.log_inv * (1 - 1e-12));
  if (it != entries.end() && same_scale(it->first, s.log_inv)) return &it->second;
  return nullptr;
}

std::vector<Scale> BoundLedger::recursion_scales(int N) const {
  std::vector<Scale> out;
  for (int j = 0; j <= N; ++j) out.push_back({delta.log_inv * (1 - std::ldexp(1.0, -(j + 1)))});
  return out;
}

void BoundLedger::fill_with_theorem(int N, double C_entries) {
  for (Scale s : recursion_scales(N)) set(s, theorem_bound_log(s, p, C_entries));
}

double recursion_rhs_log(int N, const BoundLedger& table) {
  if (N < 0) throw InvalidArgument("N must be >= 0");
  const double p = table.p;
  check_closed_p(p);
  const double L = table.delta.log_inv;
  const double top = L * std::ldexp(1.0, -(N + 1));  // log delta^(-1/2^(N+1))
  if (!(top > std::log(100.0))) throw InvalidArgument("recursion needs delta^(1/2^(N+1)) < 1/100");

  std::vector<double> logs;
  std::ostringstream missing;
  for (Scale s : table.recursion_scales(N)) {
    if (const double* v = table.find(s)) {
      logs.push_back(*v);
    } else {
      missing << " " << s.log_inv;
    }
  }
  if (!missing.str().empty()) throw InvalidArgument("ledger lacks log(1/scale) entries:" + missing.str());

  const double r = 2 / (p - 2), a = alpha(p);
  double second = top * (1 + (2 / p) * geometric_sum(N, p));
  for (int j = 0; j <= N; ++j) second += a * std::pow(r, N - j) * logs[j];
  return static_cast<double>(N) * N * std::log(table.C) + log_sum_exp(logs[N], second);
}

BootstrapPair bootstrap_exponent(int N, double p) {
  if (N < 0) throw InvalidArgument("N must be >= 0");
  check_closed_p(p);
  return {std::pow(8.0, N), N / std::pow(4 / (p - 2), N + 1)};
}

int choose_iteration_depth(Scale delta) {
  double t = std::log2(delta.log2_inv()) / 4;
  if (std::abs(t - std::round(t)) < 1e-12) t = std::round(t);
  const int N = static_cast<int>(std::ceil(t));
  if (N < 1) throw InvalidArgument("delta too large for an iteration depth N >= 1 (need delta < 1/2)");
  return N;
}

double depth_bound_log(int N, Scale delta, double p, double C) {
  const double lift = std::pow(2 / (p - 2), N + 1);
  return (std::pow(8.0, N) * std::log(C) + N * delta.log_inv * std::ldexp(1.0, -(N + 1))) / lift;
}

DepthChoice best_bound_over_depth(Scale delta, double p, double C, int max_N) {
  check_open_p(p);
  if (!(delta.log_inv > 1)) throw InvalidArgument("delta must be below 1/e");
  DepthChoice out;
  out.log_bound = depth_bound_log(1, delta, p, C);
  for (int N = 2; N <= max_N; ++N) {
    const double v = depth_bound_log(N, delta, p, C);
    if (v < out.log_bound) {
      out.log_bound = v;
      out.N_star = N;
    }
  }
  out.schedule_N = choose_iteration_depth(delta);
  out.schedule_log_bound = depth_bound_log(out.schedule_N, delta, p, C);
  return out;
}

int solve_nchoice(double p, double eps, int max_N) {
  check_closed_p(p);
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
  // running sums; the closed forms lose the equality cases to rounding
  double bracket = p / 4, term = 1, geo = 1, rpow = 1;
  const double q = (p - 2) / 4, r = 2 / (p - 2), f = 4 / (p - 2);
  double lift = f;
  for (int N = 0; N <= max_N; ++N) {
    if (N > 0) {
      term *= q;
      bracket += (p - 4) / 4 * term;
      rpow *= r;
      geo += rpow;
      lift *= f;
    }
    if (lift * bracket >= (1 / eps) * (1 + (2 / p) * geo)) return N;
  }
  throw NumericalError("no N <= " + std::to_string(max_N) + " satisfies the depth condition");
}

double LadderParams::log_K() const { return std::log(static_cast<double>(K)); }
double LadderParams::tau0() const { return std::exp(-tau_log_inv.front()); }

namespace {

// N with 2 3^N lk <= L <= 3 3^N lk, if any
int sandwich_depth(double L, double lk) {
  const double x = L / lk;
  double lo = 2, hi = 3;
  for (int N = 0; N < 60 && lo <= x; ++N, lo *= 3, hi *= 3)
    if (x <= hi) return N;
  return -1;
}

}  // namespace

LadderParams choose_circle_ladder(Scale delta, std::int64_t K) {
  if (K < 101) throw InvalidArgument("C0 = 1/K needs K >= 101");
  const double L = delta.log_inv;
  if (L < 2 * std::log(static_cast<double>(K))) throw InvalidArgument("circle ladder needs delta <= C0^2");

  LadderParams out;
  out.K_requested = K;
  out.delta = delta;
  int N = sandwich_depth(L, std::log(static_cast<double>(K)));
  if (N < 0) {
    // gap (3 3^M, 6 3^M): the smallest K' keeps the largest feasible depth
    const int Nmax = static_cast<int>(std::floor(std::log(L / (2 * std::log(static_cast<double>(K)))) / std::log(3.0)));
    for (int M = Nmax; M >= 0 && N < 0; --M) {
      const double need = L / (3 * std::pow(3.0, M));
      if (need > 43) continue;  // K' past int64
      auto Kc = std::max<std::int64_t>(K, static_cast<std::int64_t>(std::ceil(std::exp(need))) - 1);
      while (std::log(static_cast<double>(Kc)) < need) ++Kc;
      const int found = sandwich_depth(L, std::log(static_cast<double>(Kc)));
      if (found >= 0) {
        K = Kc;
        N = found;
      }
    }
    if (N < 0) throw NumericalError("no admissible C0 for this delta");
    out.c0_adjusted = true;
  }
  out.K = K;
  out.N = N;
  const double lk = out.log_K();
  for (int j = 0; j <= N; ++j) {
    std::int64_t e = std::int64_t{1} << (N - j);
    for (int k = 0; k < j; ++k) e *= 3;
    out.half_exponents.push_back(e);
    out.tau_log_inv.push_back(2 * static_cast<double>(e) * lk);
  }
  out.tau_log_inv.push_back(3 * std::pow(3.0, N) * lk);
  return out;
}

CircleBound circle_bound_log(Scale delta, double p, double C, std::int64_t K) {
  CircleBound out;
  out.ladder = choose_circle_ladder(delta, K);
  out.tau0_term = 0.5 * out.ladder.tau_log_inv.front();
  out.log_bound = out.tau0_term;
  const double lk = out.ladder.log_K();
  for (std::int64_t e : out.ladder.half_exponents)
    out.log_bound += theorem_bound_log({static_cast<double>(e) * lk}, p, C);
  return out;
}

InterpolatedBound l6_interpolated_bound_log(Scale delta, double log_A, double c, double Cc, int points) {
  if (!(log_A >= std::log(2.0))) throw InvalidArgument("|A| must be >= 2");
  if (!(delta.log_inv > 1)) throw InvalidArgument("delta must be below 1/e");
  if (points < 1) throw InvalidArgument("need at least one tau sample");
  InterpolatedBound best{std::numeric_limits<double>::infinity(), 0};
  for (int k = 1; k <= points; ++k) {
    const double tau = 0.25 * k / points;
    const double v = c * std::pow(delta.log_inv, 1 - tau) + Cc * tau * log_A;
    if (v < best.excess) best = {v, tau};
  }
  return best;
}

}  // namespace declab
