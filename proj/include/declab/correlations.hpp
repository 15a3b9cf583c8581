#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "declab/circle_lattice.hpp"
#include "declab/geometry_weights.hpp"

namespace declab {

using Count = unsigned __int128;

std::string to_string(Count c);
Count parse_count(const std::string& s);
double to_double(Count c);

// T(s) = #{(l1, l2, l3) : l1 + l2 + l3 = s}; returns sum_s T(s)^2. N <= 5000.
Count count_s6_hash(const std::vector<LatticePoint>& pts);
// Direct six-fold enumeration, N <= 12.
Count count_s6_brute(const std::vector<LatticePoint>& pts);
Count count_s4(const std::vector<LatticePoint>& pts);

std::int64_t max_abs_coordinate(const std::vector<LatticePoint>& pts);

// (1/M^2) sum_{j,k} |F(j/M, k/M)|^(2 moment) for F(x, y) = sum e(n x + m y), rounded to an integer.
// Needs M >= 4 * moment * max|coordinate| + 1 (12 c + 1 for S6, 8 c + 1 for S4).
Count moment_via_dft(const std::vector<LatticePoint>& pts, int moment, std::int64_t M);
Count s6_via_dft(const std::vector<LatticePoint>& pts, std::int64_t M);
Count s4_via_dft(const std::vector<LatticePoint>& pts, std::int64_t M);
std::int64_t s6_nyquist(std::int64_t R);  // 12 ceil(sqrt R) + 1

enum class S6Method { hash, brute, dft };
std::string to_string(S6Method m);
S6Method s6_method_from_string(const std::string& s);

struct CorrelationResult {
  std::int64_t R = 0;
  std::int64_t N = 0;
  Count S6 = 0, S4 = 0;
  double ratio_S6_N3 = 0;
  S6Method method = S6Method::hash;
  std::int64_t M = 0;  // dft grid, 0 otherwise
};

CorrelationResult correlation_result(std::int64_t R, S6Method method = S6Method::hash);
double excess_exponent(Count S6, std::int64_t N);  // log(S6/N^3) / log N

enum class ExpSumMode { period, circle };

struct ExpSumSpec {
  LatticeCircle points;
  double p = 2;
  ExpSumMode mode = ExpSumMode::period;
  SquareRegion square{Point(0.5, 0.5), 1.0};  // circle mode only
  std::int64_t M = 0;                          // period mode grid, 0 picks 12 max|c| + 1
  double spacing = 0.25;                       // circle mode, normalised frequencies
};

// Normalised L^p norm. Period mode: integer frequencies on [0,1]^2 sampled on the M x M grid.
// Circle mode: frequencies a/sqrt(R) over the given square by grid quadrature.
double expsum_lp_norm(const ExpSumSpec& spec);

struct CancellationRow {
  std::int64_t R = 0, N = 0;
  Count S6 = 0;
  double excess = 0;        // log(S6/N^3) / log N
  double lp_over_sqrtN = 0;  // period-square L^p_# norm / sqrt N
};
std::vector<CancellationRow> sqrt_cancellation_check(const std::vector<std::int64_t>& Rs, double p);

}  // namespace declab
