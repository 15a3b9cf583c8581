#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace declab {

// A scale delta in (0, 1) held as L = log(1/delta); ladder scales underflow a double long before L does.
struct Scale {
  double log_inv = 1.0;

  static Scale from_delta(double delta);
  static Scale from_log_inv(double L);
  static Scale from_log2_inv(double bits);  // delta = 2^-bits
  double delta() const;                     // may underflow to 0
  double log2_inv() const;
};

struct ExponentProfile {
  double p = 5, alpha = 0, sigma_p = 0, theorem_exponent = 0;
};

double alpha(double p);             // (p-4)/(p-2)
double sigma_p(double p);           // (1 - log2((p-2)/2)) / 4
double theorem_exponent(double p);  // 3/4 + log2((p-2)/2) / 4
ExponentProfile exponent_profile(double p);

// C (log 1/delta)^theorem_exponent(p) log log(1/delta); needs delta < 1/e and 4 < p < 6.
double theorem_bound_log(Scale delta, double p, double C = 1.0);

// sum_{j=0}^{N} r^j with r = 2/(p-2)
double geometric_sum(int N, double p);
// sum_{j=0}^{N} alpha (2/(p-2))^(N-j), term by term and in closed form 1 - (2/(p-2))^(N+1)
double product_exponent_sum(int N, double p);
double product_exponent_closed(int N, double p);

struct BoundLedger {
  double p = 5;
  double C = 1;
  Scale delta;
  std::map<double, double> entries;  // log(1/scale) -> log-bound

  void set(Scale s, double log_bound) { entries[s.log_inv] = log_bound; }
  const double* find(Scale s) const;
  // Scales delta^(1 - 1/2^(j+1)), j = 0..N, that recursion_rhs_log reads.
  std::vector<Scale> recursion_scales(int N) const;
  void fill_with_theorem(int N, double C_entries);
};

double recursion_rhs_log(int N, const BoundLedger& table);

struct BootstrapPair {
  double log_c_multiplier = 1;  // 8^N, the power of C
  double lambda = 0;            // N / (4/(p-2))^(N+1)
};
BootstrapPair bootstrap_exponent(int N, double p);

// The N with 2^-N <= (log2 1/delta)^(-1/4) <= 2^(-N+1), smaller N on ties.
int choose_iteration_depth(Scale delta);

// log (C^(8^N) delta^(-N/2^(N+1)))^(1/(2/(p-2))^(N+1))
double depth_bound_log(int N, Scale delta, double p, double C = 1.0);

struct DepthChoice {
  int N_star = 1;
  double log_bound = 0;
  int schedule_N = 1;
  double schedule_log_bound = 0;
};
DepthChoice best_bound_over_depth(Scale delta, double p, double C = 1.0, int max_N = 64);

// (4/(p-2))^(N+1) (p/4 + ((p-4)/4) sum_{j=1}^{N} ((p-2)/4)^j) >= (1/eps)(1 + (2/p) sum_{j=0}^{N} (2/(p-2))^j)
int solve_nchoice(double p, double eps, int max_N = 1000000);

struct LadderParams {
  std::int64_t K = 101;            // C0 = 1/K
  std::int64_t K_requested = 101;  // differs from K when the sandwich needed a smaller C0
  bool c0_adjusted = false;
  int N = 0;
  Scale delta;
  std::vector<double> tau_log_inv;           // log(1/tau_j), j = 0..N+1
  std::vector<std::int64_t> half_exponents;  // tau_j^(1/2) = C0^(half_exponents[j]), j = 0..N

  double log_K() const;
  double tau0() const;
};

// Sandwich C0^(3 3^N) <= delta <= C0^(2 3^N). When delta falls in a gap between consecutive N, K is raised to the
// smallest K' >= K that admits some N.
LadderParams choose_circle_ladder(Scale delta, std::int64_t K);

struct CircleBound {
  LadderParams ladder;
  double tau0_term = 0;  // (1/2) log(1/tau0)
  double log_bound = 0;
};
CircleBound circle_bound_log(Scale delta, double p, double C, std::int64_t K);

struct InterpolatedBound {
  double excess = 0;  // log of the bound minus (1/2) log |A|
  double tau_star = 0;
};
// min over tau in (0, 1/4] of c (log 1/delta)^(1-tau) + Cc tau log|A|, on a grid of `points` values.
InterpolatedBound l6_interpolated_bound_log(Scale delta, double log_A, double c, double Cc, int points = 1000);

}  // namespace declab
