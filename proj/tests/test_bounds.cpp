#include <doctest.h>

#include <cmath>

#include "declab/bounds.hpp"
#include "declab/errors.hpp"
#include "declab/quadrature.hpp"
#include "frozen.hpp"

using namespace declab;

namespace {

double rnd(std::uint64_t k) { return unit_from_bits(mix64(k)); }

// direct evaluation of the depth-N bound, log domain
double depth_oracle(int N, double L, double p, double logC) {
  const double r = 2 / (p - 2);
  return (std::pow(8.0, N) * logC + N * L / std::pow(2.0, N + 1)) / std::pow(r, N + 1);
}

bool nchoice_oracle(int N, double p, double eps) {
  double s1 = 0, s2 = 0;
  for (int j = 1; j <= N; ++j) s1 += std::pow((p - 2) / 4, j);
  for (int j = 0; j <= N; ++j) s2 += std::pow(2 / (p - 2), j);
  return std::pow(4 / (p - 2), N + 1) * (p / 4 + (p - 4) / 4 * s1) >= (1 / eps) * (1 + 2 / p * s2);
}

}  // namespace

TEST_CASE("exponent profile") {
  CHECK(theorem_exponent(4 + 1e-12) == doctest::Approx(0.75));
  CHECK(theorem_exponent(6 - 1e-12) == doctest::Approx(1.0));
  CHECK(alpha(4) == 0);
  CHECK(alpha(5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  for (int k = 0; k < 1000; ++k) {
    const double p = 4 + 2 * rnd(static_cast<std::uint64_t>(k));
    CHECK(std::abs(theorem_exponent(p) - (1 - sigma_p(p))) < 1e-12);
    CHECK(alpha(p + 1e-3) > alpha(p));
  }
  const ExponentProfile e = exponent_profile(5);
  CHECK(e.alpha == alpha(5));
  CHECK(e.sigma_p == sigma_p(5));
}

TEST_CASE("theorem bound") {
  const double v = theorem_bound_log(Scale::from_log_inv(M_E), 5, 1);
  CHECK(v == doctest::Approx(std::pow(M_E, 0.75 + 0.25 * std::log2(1.5))).epsilon(1e-14));
  CHECK_THROWS_AS(theorem_bound_log(Scale::from_delta(0.5), 5, 1), InvalidArgument);
  CHECK_THROWS_AS(theorem_bound_log(Scale::from_log2_inv(64), 6.5, 1), InvalidArgument);
  double last = 0;
  for (double bits = 2; bits < 4096; bits *= 1.5) {
    const double b = theorem_bound_log(Scale::from_log2_inv(bits), 5);
    CHECK(b > last);
    last = b;
  }
}

TEST_CASE("product exponent identity") {
  for (double p : {4.2, 4.5, 5.0, 5.5, 5.9})
    for (int N = 0; N <= 20; ++N) CHECK(std::abs(product_exponent_sum(N, p) - product_exponent_closed(N, p)) < 1e-12);
  CHECK(2.0 / 6 * geometric_sum(2, 6) == doctest::Approx(7.0 / 12).epsilon(1e-15));
}

TEST_CASE("recursion right-hand side") {
  BoundLedger t;
  t.p = 5;
  t.C = 1;
  t.delta = Scale::from_log2_inv(100);
  for (const Scale& s : t.recursion_scales(0)) t.set(s, 0);
  const double L = t.delta.log_inv;
  CHECK(recursion_rhs_log(0, t) == doctest::Approx(std::log1p(std::exp(0.5 * (1 + 2.0 / 5) * L))).epsilon(1e-12));

  BoundLedger empty = t;
  empty.entries.clear();
  CHECK_THROWS_AS(recursion_rhs_log(0, empty), InvalidArgument);
}

TEST_CASE("theorem is consistent with its own recursion") {
  double slack = 0;
  for (double bits = 64; bits <= 1 << 20; bits *= 2)
    for (double p : {4.5, 5.0, 5.5}) {
      BoundLedger t;
      t.p = p;
      t.delta = Scale::from_log2_inv(bits);
      const int N = choose_iteration_depth(t.delta);
      if (t.delta.log_inv / std::pow(2.0, N + 1) <= std::log(100.0)) continue;
      t.fill_with_theorem(N, 1);
      slack = std::max(slack, theorem_bound_log(t.delta, p) - recursion_rhs_log(N, t));
    }
  CHECK(slack <= frozen::value("bounds.recursion_slack", slack) + 1e-9);
}

TEST_CASE("bootstrap exponents") {
  CHECK(bootstrap_exponent(3, 4).lambda == doctest::Approx(3.0 / 16).epsilon(1e-15));
  CHECK(bootstrap_exponent(2, 5).lambda == doctest::Approx(27.0 / 32).epsilon(1e-15));
  CHECK(bootstrap_exponent(2, 5).log_c_multiplier == 64);
  for (double p : {4.1, 5.0, 5.9}) {
    double last = 1e300;
    int N = 40;
    for (; N <= 4000 && last >= 1e-3; N += 40) {
      const double l = bootstrap_exponent(N, p).lambda;
      CHECK(l < last);
      last = l;
    }
    CHECK(last < 1e-3);
  }
}

TEST_CASE("iteration depth") {
  CHECK(choose_iteration_depth(Scale::from_log2_inv(16)) == 1);
  CHECK(choose_iteration_depth(Scale::from_log2_inv(81)) == 2);
  CHECK(choose_iteration_depth(Scale::from_log2_inv(256)) == 2);
  CHECK_THROWS_AS(choose_iteration_depth(Scale::from_log2_inv(1)), InvalidArgument);
}

TEST_CASE("best bound over depth matches an exhaustive scan") {
  for (double logC : {0.0, 1.0}) {
    const Scale d = Scale::from_log2_inv(16);
    int arg = 1;
    for (int N = 1; N <= 64; ++N)
      if (depth_oracle(N, d.log_inv, 5, logC) < depth_oracle(arg, d.log_inv, 5, logC)) arg = N;
    const DepthChoice c = best_bound_over_depth(d, 5, std::exp(logC));
    CHECK(c.N_star == arg);
    CHECK(c.log_bound == doctest::Approx(depth_oracle(arg, d.log_inv, 5, logC)).epsilon(1e-12));
    CHECK(c.schedule_log_bound >= c.log_bound);
  }
  double Cp = 0;
  for (double bits = 16; bits <= 1 << 16; bits *= 2) {
    const Scale d = Scale::from_log2_inv(bits);
    const DepthChoice c = best_bound_over_depth(d, 5);
    Cp = std::max(Cp, (c.schedule_log_bound - c.log_bound) / theorem_bound_log(d, 5));
    CHECK(depth_bound_log(3, Scale::from_log2_inv(2 * bits), 5) > depth_bound_log(3, d, 5));
  }
  CHECK(Cp <= frozen::value("bounds.schedule_depth_C", Cp) * 1.05);
}

TEST_CASE("nchoice") {
  CHECK(solve_nchoice(4, 0.5) == 1);
  for (double p : {4.0, 4.5, 5.0, 6.0})
    for (double eps : {1.0, 0.5, 0.1, 0.01}) {
      int want = 0;
      while (!nchoice_oracle(want, p, eps)) ++want;
      CHECK(solve_nchoice(p, eps) == want);
      CHECK(solve_nchoice(p, eps / 2) >= solve_nchoice(p, eps));
    }
  CHECK_THROWS_AS(solve_nchoice(3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(solve_nchoice(5, 0), InvalidArgument);
}

TEST_CASE("circle ladder examples") {
  const double lk = std::log(128.0);
  const LadderParams a = choose_circle_ladder(Scale::from_log_inv(2.5 * lk), 128);
  CHECK(a.N == 0);
  CHECK(a.K == 128);
  CHECK(a.tau_log_inv.front() == doctest::Approx(2 * lk));
  const LadderParams b = choose_circle_ladder(Scale::from_log_inv(7 * lk), 128);
  CHECK(b.N == 1);
  CHECK(b.half_exponents == std::vector<std::int64_t>{2, 3});
  CHECK_THROWS_AS(choose_circle_ladder(Scale::from_log_inv(1.5 * lk), 128), InvalidArgument);
  CHECK_THROWS_AS(choose_circle_ladder(Scale::from_log_inv(100), 100), InvalidArgument);
  // exponent 4 sits in the gap between N = 0 and N = 1
  const LadderParams g = choose_circle_ladder(Scale::from_log_inv(4 * lk), 128);
  CHECK(g.c0_adjusted);
  CHECK(g.K > 128);
  CHECK(g.K_requested == 128);
}

TEST_CASE("circle ladder validity on random inputs") {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto K = static_cast<std::int64_t>(101 + std::floor(900 * rnd(3 * k)));
    const double bits = 2 * std::log2(static_cast<double>(K)) * std::pow(200.0, rnd(3 * k + 1));
    const Scale d = Scale::from_log2_inv(bits);
    const LadderParams lp = choose_circle_ladder(d, K);
    const double lK = lp.log_K();
    const int N = lp.N;
    REQUIRE(lp.tau_log_inv.size() == static_cast<std::size_t>(N + 2));
    CHECK(lp.tau_log_inv[N] <= d.log_inv * (1 + 1e-12));
    CHECK(d.log_inv <= lp.tau_log_inv[N + 1] * (1 + 1e-12));
    for (int j = 0; j <= N; ++j) {
      std::int64_t e = std::int64_t{1} << (N - j);
      for (int i = 0; i < j; ++i) e *= 3;
      CHECK(lp.half_exponents[j] == e);
    }
    // tau0^((3/2)^(N+1)) = C0^(3 3^N)
    const double lhs = std::pow(1.5, N + 1) * lp.tau_log_inv.front();
    CHECK(std::abs(lhs - 3 * std::pow(3.0, N) * lK) <= 1e-12 * lhs);
  }
}

TEST_CASE("circle bound") {
  const Scale d = Scale::from_log_inv(2.5 * std::log(128.0));
  const CircleBound one = circle_bound_log(d, 5, 1, 128);
  REQUIRE(one.ladder.N == 0);
  const double tau0_half = Scale::from_log_inv(0.5 * one.ladder.tau_log_inv.front()).log_inv;
  CHECK(one.log_bound == doctest::Approx(one.tau0_term + theorem_bound_log(Scale::from_log_inv(tau0_half), 5)));

  double c3 = 0, c2 = 0, last = 0;
  const double kappa = 2;
  for (double bits = 20; bits <= 1e6; bits *= 1.25) {
    const Scale s = Scale::from_log2_inv(bits);
    const CircleBound cb = circle_bound_log(s, 5, 1, 101);
    const double L = s.log_inv;
    c3 = std::max(c3, cb.tau0_term / std::pow(L, std::log(2.0) / std::log(3.0)));
    c2 = std::max(c2, cb.log_bound / (std::pow(L, 1 - sigma_p(5)) * std::pow(std::log(L), kappa)));
    CHECK(cb.log_bound >= last * (1 - 1e-12));
    last = cb.log_bound;
  }
  CHECK(c3 <= frozen::value("bounds.circle_tau0_C", c3) * 1.05);
  CHECK(c2 <= frozen::value("bounds.circle_shape_C", c2) * 1.05);
}

TEST_CASE("interpolated L6 bound") {
  const Scale d = Scale::from_log2_inv(1000);
  double last_tau = 1;
  for (double logA : {1e1, 1e3, 1e5, 1e7}) {
    const InterpolatedBound b = l6_interpolated_bound_log(d, logA, 1, 1);
    CHECK(b.tau_star <= last_tau);
    last_tau = b.tau_star;
    CHECK(b.excess <= std::pow(d.log_inv, 1 - 0.125) + 0.125 * logA);
  }
  CHECK(last_tau == doctest::Approx(0.25 / 1000));
  // log|A| = L / log L: excess / log|A| shrinks along the sequence
  double last = 1e300;
  for (double L = 1e3; L <= 1e12; L *= 10) {
    const double logA = L / std::log(L);
    const double r = l6_interpolated_bound_log(Scale::from_log_inv(L), logA, 1, 1).excess / logA;
    CHECK(r < last);
    last = r;
  }
  CHECK_THROWS_AS(l6_interpolated_bound_log(d, 0.1, 1, 1), InvalidArgument);
}
