#include "declab/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "declab/errors.hpp"
#include "declab/extension_ops.hpp"
#include "declab/parallel.hpp"

namespace declab {

namespace {

// Sums of up to three points stay well inside 31 bits per coordinate at desk scale.
std::uint64_t pack(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(x + (std::int64_t{1} << 31)) << 32) |
         static_cast<std::uint64_t>(y + (std::int64_t{1} << 31));
}

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

Count sum_of_squares(const std::unordered_map<std::uint64_t, std::uint64_t>& counts) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end());
  Count total = 0;
  for (const auto& [key, c] : items) total += static_cast<Count>(c) * c;
  return total;
}

void check_coordinates(const std::vector<LatticePoint>& pts) {
  if (max_abs_coordinate(pts) >= (std::int64_t{1} << 28)) throw ResourceGuard("coordinates too large for the sum map");
}

}  // namespace

std::string to_string(Count c) {
  if (c == 0) return "0";
  std::string s;
  while (c > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Count parse_count(const std::string& s) {
  if (s.empty()) throw InvalidArgument("empty count");
  Count c = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw InvalidArgument("malformed count '" + s + "'");
    c = c * 10 + static_cast<Count>(ch - '0');
  }
  return c;
}

double to_double(Count c) { return static_cast<double>(c); }

std::int64_t max_abs_coordinate(const std::vector<LatticePoint>& pts) {
  std::int64_t m = 0;
  for (const auto& p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y)});
  return m;
}

Count count_s6_hash(const std::vector<LatticePoint>& pts) {
  if (pts.empty()) return 0;
  if (pts.size() > 5000) throw ResourceGuard("N > 5000: use the dft method");
  check_coordinates(pts);
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts, triple;
  for (const auto& a : pts)
    for (const auto& b : pts) ++pair_counts[pack(a.x + b.x, a.y + b.y)];
  triple.reserve(pair_counts.size() * 4);
  for (const auto& [key, c] : pair_counts) {
    const auto sx = static_cast<std::int64_t>(key >> 32) - (std::int64_t{1} << 31);
    const auto sy = static_cast<std::int64_t>(key & 0xffffffffu) - (std::int64_t{1} << 31);
    for (const auto& z : pts) triple[pack(sx + z.x, sy + z.y)] += c;
  }
  return sum_of_squares(triple);
}

Count count_s6_brute(const std::vector<LatticePoint>& pts) {
  const std::size_t n = pts.size();
  if (n > 12) throw InvalidArgument("brute-force S6 is limited to N <= 12");
  Count total = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = 0; f < n; ++f) {
              const std::int64_t x = pts[a].x + pts[b].x + pts[c].x - pts[d].x - pts[e].x - pts[f].x;
              const std::int64_t y = pts[a].y + pts[b].y + pts[c].y - pts[d].y - pts[e].y - pts[f].y;
              if (x == 0 && y == 0) ++total;
            }
  return total;
}

Count count_s4(const std::vector<LatticePoint>& pts) {
  check_coordinates(pts);
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  for (const auto& a : pts)
    for (const auto& b : pts) ++pair_counts[pack(a.x + b.x, a.y + b.y)];
  return sum_of_squares(pair_counts);
}

Count moment_via_dft(const std::vector<LatticePoint>& pts, int moment, std::int64_t M) {
  if (moment < 1) throw InvalidArgument("moment must be >= 1");
  const std::int64_t c = max_abs_coordinate(pts);
  // 2 moment c + 1 already suffices; the documented bound is twice that
  const std::int64_t need = 4 * moment * c + 1;
  if (M < need) throw InvalidArgument("grid M = " + std::to_string(M) + " is below the exactness bound " + std::to_string(need));
  if (M > 20000) throw ResourceGuard("dft grid too large");
  if (pts.empty()) return 0;
  std::vector<cdouble> table(M);
  for (std::int64_t t = 0; t < M; ++t) {
    const double a = 2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(M);
    table[t] = {std::cos(a), std::sin(a)};
  }
  auto mod = [M](std::int64_t v) { return ((v % M) + M) % M; };
  std::vector<Neumaier> rows(M);
  parallel_for(M, [&](std::int64_t j) {
    Neumaier acc;
    for (std::int64_t k = 0; k < M; ++k) {
      cdouble F = 0;
      for (const auto& p : pts) F += table[mod(p.x * j + p.y * k)];
      acc.add(std::pow(std::norm(F), moment));
    }
    rows[j] = acc;
  });
  Neumaier total;
  for (const auto& r : rows) {
    total.add(r.sum);
    total.add(r.comp);
  }
  const double mean = total.value() / (static_cast<double>(M) * static_cast<double>(M));
  const double rounded = std::round(mean);
  if (std::abs(mean - rounded) > 1e-6 * std::max(1.0, rounded))
    throw NumericalError("dft moment lost precision: mean " + std::to_string(mean));
  return static_cast<Count>(rounded);
}

Count s6_via_dft(const std::vector<LatticePoint>& pts, std::int64_t M) { return moment_via_dft(pts, 3, M); }
Count s4_via_dft(const std::vector<LatticePoint>& pts, std::int64_t M) { return moment_via_dft(pts, 2, M); }

std::int64_t s6_nyquist(std::int64_t R) {
  std::int64_t s = isqrt(R);
  if (s * s < R) ++s;
  return 12 * s + 1;
}

std::string to_string(S6Method m) {
  switch (m) {
    case S6Method::hash: return "hash";
    case S6Method::brute: return "brute";
    case S6Method::dft: return "dft";
  }
  return "hash";
}

S6Method s6_method_from_string(const std::string& s) {
  if (s == "hash") return S6Method::hash;
  if (s == "brute") return S6Method::brute;
  if (s == "dft") return S6Method::dft;
  throw InvalidArgument("unknown S6 method '" + s + "' (hash, brute, dft)");
}

double excess_exponent(Count S6, std::int64_t N) {
  if (N < 2) return 0;
  const double n = static_cast<double>(N);
  return (std::log(to_double(S6)) - 3 * std::log(n)) / std::log(n);
}

CorrelationResult correlation_result(std::int64_t R, S6Method method) {
  const LatticeCircle lc = enumerate_circle_points(R);
  CorrelationResult out;
  out.R = R;
  out.N = lc.N();
  out.method = method;
  switch (method) {
    case S6Method::hash: out.S6 = count_s6_hash(lc.points); break;
    case S6Method::brute: out.S6 = count_s6_brute(lc.points); break;
    case S6Method::dft:
      out.M = s6_nyquist(R);
      out.S6 = s6_via_dft(lc.points, out.M);
      break;
  }
  out.S4 = count_s4(lc.points);
  if (out.N > 0) out.ratio_S6_N3 = to_double(out.S6) / std::pow(static_cast<double>(out.N), 3);
  return out;
}

double expsum_lp_norm(const ExpSumSpec& spec) {
  const auto& pts = spec.points.points;
  if (!(spec.p >= 1)) throw InvalidArgument("p must be >= 1");
  if (pts.empty()) return 0;
  if (spec.mode == ExpSumMode::period) {
    const std::int64_t c = max_abs_coordinate(pts);
    const std::int64_t M = spec.M > 0 ? spec.M : 12 * c + 1;
    if (M < 2 * c + 1) throw InvalidArgument("period grid too coarse");
    if (M > 20000) throw ResourceGuard("period grid too large");
    std::vector<cdouble> table(M);
    for (std::int64_t t = 0; t < M; ++t) {
      const double a = 2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(M);
      table[t] = {std::cos(a), std::sin(a)};
    }
    auto mod = [M](std::int64_t v) { return ((v % M) + M) % M; };
    std::vector<Neumaier> rows(M);
    parallel_for(M, [&](std::int64_t j) {
      for (std::int64_t k = 0; k < M; ++k) {
        cdouble F = 0;
        for (const auto& p : pts) F += table[mod(p.x * j + p.y * k)];
        rows[j].add(std::pow(std::norm(F), spec.p / 2));
      }
    });
    Neumaier total;
    for (const auto& r : rows) {
      total.add(r.sum);
      total.add(r.comp);
    }
    return std::pow(total.value() / (static_cast<double>(M) * static_cast<double>(M)), 1 / spec.p);
  }
  if (!(spec.spacing > 0 && spec.spacing <= 0.25)) throw InvalidArgument("circle-mode spacing must lie in (0, 1/4]");
  const double root = std::sqrt(static_cast<double>(spec.points.R));
  PlaneWaves w;
  const auto n = static_cast<Eigen::Index>(pts.size());
  w.f1.resize(n);
  w.f2.resize(n);
  w.c = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w.f1(i) = static_cast<double>(pts[i].x) / root;
    w.f2(i) = static_cast<double>(pts[i].y) / root;
  }
  const Grid grid = Grid::covering(spec.square, spec.spacing);
  SampledField f{grid, evaluate_plane_waves(w, grid.xs(), grid.ys()), spec.square};
  return lp_norm(f, spec.p, NormMode::normalized());
}

std::vector<CancellationRow> sqrt_cancellation_check(const std::vector<std::int64_t>& Rs, double p) {
  std::vector<CancellationRow> out;
  for (std::int64_t R : Rs) {
    const LatticeCircle lc = enumerate_circle_points(R);
    if (lc.N() < 4) throw InvalidArgument("R = " + std::to_string(R) + " has fewer than 4 lattice points");
    CancellationRow row;
    row.R = R;
    row.N = lc.N();
    row.S6 = count_s6_hash(lc.points);
    row.excess = excess_exponent(row.S6, row.N);
    ExpSumSpec spec;
    spec.points = lc;
    spec.p = p;
    row.lp_over_sqrtN = expsum_lp_norm(spec) / std::sqrt(static_cast<double>(row.N));
    out.push_back(row);
  }
  return out;
}

}  // namespace declab
