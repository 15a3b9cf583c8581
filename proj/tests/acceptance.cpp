// Acceptance run: one PASS/FAIL line per criterion, plus an optional JSON report without timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "declab/bounds.hpp"
#include "declab/circle_lattice.hpp"
#include "declab/correlations.hpp"
#include "declab/decoupling_lab.hpp"
#include "declab/extension_ops.hpp"
#include "declab/geometry_weights.hpp"
#include "declab/io.hpp"
#include "declab/quadrature.hpp"
#include "frozen.hpp"

using namespace declab;

namespace {

// tolerances
constexpr double kParsevalRel = 1e-10;
constexpr double kTrivialSlack = 1.001;
constexpr double kParabolicDev = 1e-4;
constexpr double kAnisotropicDev = 1e-5;
constexpr double kExponentAbs = 1e-12;
constexpr double kLadderRel = 1e-12;
constexpr double kFrozenRel = 0.05;
constexpr double kMonteCarloRel = 0.01;
constexpr double kOrderingRel = 1e-12;
constexpr double kS6Seconds = 60;
constexpr double kSuiteSeconds = 600;
constexpr double kParabolicSpacing = 0.125;
constexpr std::int64_t kMonteCarloSamples = 2048 * 2048;

const std::vector<std::int64_t> kRSuite = {1, 2, 5, 25, 325, 1105};

struct Outcome {
  bool pass = true;
  json detail = json::object();
  double seconds = 0;  // stdout only
};

double rnd(std::uint64_t k) { return unit_from_bits(mix64(k)); }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::int64_t isqrt_ceil(std::int64_t R) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(R)));
  while (r * r < R) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= R) --r;
  return r;
}

Outcome sixth_moment_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  json rows = json::array();
  for (std::int64_t R : kRSuite) {
    const auto pts = enumerate_circle_points(R).points;
    const std::int64_t M = 12 * isqrt_ceil(R) + 1;
    const Count h = count_s6_hash(pts), d = s6_via_dft(pts, M);
    bool ok = h == d;
    if (R <= 5) ok = ok && count_s6_brute(pts) == h;
    o.pass = o.pass && ok;
    rows.push_back({{"R", R}, {"M", M}, {"S6", to_string(h)}, {"ok", ok}});
  }
  o.seconds = elapsed(t0);
  o.pass = o.pass && o.seconds < kS6Seconds;
  o.detail["rows"] = rows;
  return o;
}

Outcome parseval() {
  Outcome o;
  double worst = 0;
  for (std::int64_t R : kRSuite) {
    ExpSumSpec s;
    s.points = enumerate_circle_points(R);
    s.p = 2;
    const double rootN = std::sqrt(static_cast<double>(s.points.N()));
    worst = std::max(worst, std::abs(expsum_lp_norm(s) - rootN) / rootN);
  }
  o.pass = worst <= kParsevalRel;
  o.detail["max_rel_dev"] = worst;
  return o;
}

Outcome trivial_envelope() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const std::vector<double> ps = {4.5, 5.0, 5.5};
  json rows = json::array();
  std::int64_t count = 0;
  for (const Rational delta : {Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32)}) {
    ExperimentSpec spec;
    spec.delta = delta;
    spec.p = 5;
    spec.family = random_phase_family(7, 32, delta);
    spec.family.push_back(DensityFunction::constant(1.0));
    const auto table = decoupling_ratios(spec, ps);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      double worst = 0;
      for (const auto& r : table[k]) {
        worst = std::max(worst, r.ratio / trivial_bound(delta, ps[k]));
        ++count;
      }
      o.pass = o.pass && worst <= kTrivialSlack;
      rows.push_back({{"delta", delta.str()}, {"p", ps[k]}, {"max_ratio_over_trivial", worst}});
    }
  }
  o.seconds = elapsed(t0);
  o.pass = o.pass && o.seconds < kSuiteSeconds;
  o.detail["ratios"] = count;
  o.detail["rows"] = rows;
  return o;
}

SampledField tabulate(Point origin, double h, Eigen::Index n, const std::function<cdouble(double, double)>& f) {
  SampledField F;
  F.grid.origin = origin;
  F.grid.spacing = F.grid.spacing_y = h;
  F.grid.nx = F.grid.ny = n;
  F.values.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Point x = F.grid.node(i, j);
      F.values(j, i) = f(x.x(), x.y());
    }
  const double side = h * static_cast<double>(n - 1);
  F.square = SquareRegion(origin + Point(0.5 * side, 0.5 * side), side);
  return F;
}

Outcome rescaling() {
  Outcome o;
  const SquareRegion B(Point(0, 0), 16);
  const std::vector<Interval> intervals = {Interval::unit(), Interval(Rational(1, 2), Rational(1)),
                                           Interval(Rational(1, 4), Rational(1, 2))};
  const std::vector<DensityFunction> gs = {DensityFunction::constant(1.0), DensityFunction::random_phase(7, Rational(1, 16))};
  double par = 0;
  int cases = 0;
  for (const auto& I : intervals)
    for (double p : {4.0, 5.0})
      for (const auto& g : gs) {
        par = std::max(par, parabolic_rescale_identity_check(g, I, p, B, kParabolicSpacing));
        ++cases;
      }

  const SampledField gauss =
      tabulate(Point(-6, -6), 0.0625, 193, [](double x, double y) { return cdouble(std::exp(-(x * x + y * y))); });
  const SampledField F = evaluate_extension(DensityFunction::random_phase(4, Rational(1, 8)), Interval::unit(),
                                            CurveSpec::parabola(1.0), SquareRegion(Point(0, 0), 8), 0.0625);
  double ani = 0;
  const std::vector<std::pair<double, double>> gauss_cases = {{2, 2}, {1.5, 4}, {0.5, 6}};
  const std::vector<std::pair<double, double>> field_cases = {{1.0 / 3, 5}, {0.5, 4}, {0.25, 6}};
  for (auto [r, p] : gauss_cases) ani = std::max(ani, anisotropic_rescale_identity_check(r, p, gauss));
  for (auto [r, p] : field_cases) ani = std::max(ani, anisotropic_rescale_identity_check(r, p, F));

  o.pass = cases == 12 && par < kParabolicDev && ani < kAnisotropicDev;
  o.detail["parabolic_cases"] = cases;
  o.detail["parabolic_max_dev"] = par;
  o.detail["anisotropic_cases"] = gauss_cases.size() + field_cases.size();
  o.detail["anisotropic_max_dev"] = ani;
  return o;
}

Outcome exponent_algebra() {
  Outcome o;
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const double p = 4 + 2 * (k + 0.5) / 1000;
    worst = std::max(worst, std::abs(theorem_exponent(p) - (1 - sigma_p(p))));
  }
  double prod = 0;
  for (double p : {4.5, 5.0, 5.5})
    for (int N = 0; N <= 20; ++N) prod = std::max(prod, std::abs(product_exponent_sum(N, p) - product_exponent_closed(N, p)));
  const bool alpha_exact = alpha(5) == 1.0 / 3;
  o.pass = worst <= kExponentAbs && prod <= kExponentAbs && alpha_exact;
  o.detail["theorem_exponent_max_dev"] = worst;
  o.detail["product_exponent_max_dev"] = prod;
  o.detail["alpha5_exact"] = alpha_exact;
  return o;
}

Outcome ladder_validity() {
  Outcome o;
  int bad = 0, adjusted = 0;
  double worst = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto K = static_cast<std::int64_t>(101 + std::floor(900 * rnd(3 * k + 0x1000)));
    const double bits = 2 * std::log2(static_cast<double>(K)) * std::pow(200.0, rnd(3 * k + 0x1001));
    const Scale d = Scale::from_log2_inv(bits);
    const LadderParams lp = choose_circle_ladder(d, K);
    const int N = lp.N;
    const double lk = lp.log_K();
    bool ok = lp.tau_log_inv.size() == static_cast<std::size_t>(N + 2) &&
              lp.half_exponents.size() == static_cast<std::size_t>(N + 1);
    ok = ok && lp.tau_log_inv[N] <= d.log_inv * (1 + kLadderRel) && d.log_inv <= lp.tau_log_inv[N + 1] * (1 + kLadderRel);
    for (int j = 0; ok && j <= N; ++j) {
      ok = lp.half_exponents[j] > 0;
      worst = std::max(worst, std::abs(0.5 * lp.tau_log_inv[j] - static_cast<double>(lp.half_exponents[j]) * lk) /
                                  (0.5 * lp.tau_log_inv[j]));
    }
    const double lhs = std::pow(1.5, N + 1) * lp.tau_log_inv.front();
    const double rhs = 3 * std::pow(3.0, N) * lk;
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    if (!ok) ++bad;
    if (lp.c0_adjusted) ++adjusted;
  }
  o.pass = bad == 0 && worst <= kLadderRel;
  o.detail["failures"] = bad;
  o.detail["c0_adjusted"] = adjusted;
  o.detail["max_log_identity_rel_dev"] = worst;
  return o;
}

Outcome ball_geometry() {
  Outcome o;
  double worst = 0, mc_worst = 0;
  int pairs = 0, mc_checked = 0;
  std::uint64_t k = 0;
  while (pairs < 1000) {
    const int b = 1 + static_cast<int>(mix64(k + 0x7000) % 2);
    const Rational nu(1, (mix64(k + 0x7001) % 2) ? 16 : 8);
    const Rational step = nu.pow(b);
    const auto n = static_cast<std::uint64_t>(step.inverse().to_double());
    const auto i1 = mix64(k + 0x7002) % n, i2 = mix64(k + 0x7003) % n;
    const Interval J1(Rational(static_cast<std::int64_t>(i1)) * step, Rational(static_cast<std::int64_t>(i1 + 1)) * step);
    const Interval J2(Rational(static_cast<std::int64_t>(i2)) * step, Rational(static_cast<std::int64_t>(i2 + 1)) * step);
    const double w = step.inverse().to_double(), l = w * w;
    const Point off(w * (rnd(k + 0x7004) - 0.5), w * (rnd(k + 0x7005) - 0.5));
    const std::uint64_t seed = k;
    ++k;
    if (J1.distance(J2) < nu) continue;
    ++pairs;
    const OrientedBox P1(Point(0, 0), l, w, tiling_direction(J1));
    const OrientedBox P2(off, l, w, tiling_direction(J2));
    const double a = oriented_box_intersection_area(P1, P2);
    worst = std::max(worst, a / std::pow(nu.inverse().to_double(), 2 * b + 1));
    if (a > 0) {
      const double mc = monte_carlo_intersection_area(P1, P2, kMonteCarloSamples, seed);
      mc_worst = std::max(mc_worst, std::abs(mc - a) / a);
      ++mc_checked;
    }
  }
  const double C = frozen::value("acceptance.intersection_C", worst);
  o.pass = worst <= C * (1 + kFrozenRel) && std::abs(worst - C) <= kFrozenRel * C && mc_worst <= kMonteCarloRel;
  o.detail["pairs"] = pairs;
  o.detail["C"] = worst;
  o.detail["mc_checked"] = mc_checked;
  o.detail["mc_max_rel_dev"] = mc_worst;
  return o;
}

Outcome weight_calculus() {
  Outcome o;
  struct Row {
    const char* key;
    double value;
  };
  std::vector<Row> rows;
  const ConvolutionConstants c1 = weight_convolution_check(1, 1, {0.125, 8});
  const ConvolutionConstants c4 = weight_convolution_check(4, 1, {0.25, 32});
  const SubweightConstant s4 = sum_of_subweights_check(SquareRegion(Point(0, 0), 4), 1, {0.25, 16});
  const SubweightConstant s8 = sum_of_subweights_check(SquareRegion(Point(0, 0), 8), 2, {0.25, 32});
  rows.push_back({"weights.convolution_upper_R1", c1.upper});
  rows.push_back({"weights.convolution_lower_R1", c1.lower});
  rows.push_back({"weights.convolution_upper_R4", c4.upper});
  rows.push_back({"acceptance.convolution_lower_R4", c4.lower});
  rows.push_back({"weights.subweights_B4_r1", s4.constant});
  rows.push_back({"acceptance.subweights_B8_r2", s8.constant});
  json detail = json::object();
  for (const auto& r : rows) {
    const double f = frozen::value(r.key, r.value);
    const bool ok = std::isfinite(r.value) && r.value > 0 && std::abs(r.value - f) <= kFrozenRel * f;
    o.pass = o.pass && ok;
    detail[r.key] = r.value;
  }
  int violations = 0;
  const WeightKind radial{WeightVariant::radial_w, 100}, product{WeightVariant::product_w_tilde, 100};
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const SquareRegion B(Point(10 * rnd(4 * k + 0x9000) - 5, 10 * rnd(4 * k + 0x9001) - 5), 0.5 + 4 * rnd(4 * k + 0x9002));
    const Point x = B.center + Point(std::tan(3 * rnd(4 * k + 0x9003) - 1.5), 20 * rnd(5 * k + 0x9004) - 10);
    const double w = evaluate_weight(radial, B, x), wt = evaluate_weight(product, B, x);
    if (!(wt <= w * (1 + kOrderingRel) && w <= std::sqrt(wt) * (1 + kOrderingRel))) ++violations;
  }
  o.pass = o.pass && violations == 0;
  detail["ordering_points"] = 10000;
  detail["ordering_violations"] = violations;
  o.detail = detail;
  return o;
}

Count pow_count(std::int64_t n, int k) {
  Count c = 1;
  for (int i = 0; i < k; ++i) c *= static_cast<Count>(n);
  return c;
}

Outcome s6_sandwich() {
  Outcome o;
  int radii = 0, bad = 0;
  for (std::int64_t R = 1; R <= 10000; ++R) {
    const auto pts = enumerate_circle_points(R).points;
    if (pts.empty()) continue;
    ++radii;
    const auto N = static_cast<std::int64_t>(pts.size());
    const Count s = count_s6_hash(pts);
    if (!(pow_count(N, 3) <= s && s <= pow_count(N, 5))) ++bad;
  }
  int sym_bad = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::int64_t R = kRSuite[mix64(k + 0xa000) % kRSuite.size()];
    const auto pts = enumerate_circle_points(R).points;
    const auto sym = mix64(k + 0xa001) % 8;
    const std::int64_t vx = static_cast<std::int64_t>(mix64(k + 0xa002) % 20001) - 10000;
    const std::int64_t vy = static_cast<std::int64_t>(mix64(k + 0xa003) % 20001) - 10000;
    std::vector<LatticePoint> moved;
    for (const auto& q : pts) {
      std::int64_t x = q.x, y = q.y;
      if (sym & 1) x = -x;
      if (sym & 2) y = -y;
      if (sym & 4) std::swap(x, y);
      moved.push_back({x + vx, y + vy});
    }
    if (!(count_s6_hash(moved) == count_s6_hash(pts))) ++sym_bad;
  }
  o.pass = bad == 0 && sym_bad == 0;
  o.detail["radii"] = radii;
  o.detail["sandwich_failures"] = bad;
  o.detail["symmetry_cases"] = 200;
  o.detail["symmetry_failures"] = sym_bad;
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::string self_path(const char* argv0) {
  char buf[4096];
  const auto n = readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) return argv0;
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"declab acceptance run"};
  std::string report_path;
  bool no_rerun = false;
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_flag("--no-rerun", no_rerun, "skip the determinism rerun (used by the rerun itself)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "sixth moment identity", sixth_moment_identity},
      {2, "parseval", parseval},
      {3, "trivial bound envelope", trivial_envelope},
      {4, "rescaling identities", rescaling},
      {5, "exponent algebra", exponent_algebra},
      {6, "ladder validity", ladder_validity},
      {7, "ball inflation geometry", ball_geometry},
      {8, "weight calculus", weight_calculus},
      {9, "S6 sandwich", s6_sandwich},
  };

  json results = json::array();
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = {{"exception", e.what()}};
    }
    o.seconds = elapsed(t0);
    all = all && o.pass;
    if (!no_rerun)
      std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << format_double(std::round(o.seconds * 10) / 10)
                << " s) " << o.detail.dump() << std::endl;
    results.push_back({{"id", c.id}, {"name", c.name}, {"pass", o.pass}, {"detail", o.detail}});
  }
  const std::string core = json{{"version", kVersion}, {"criteria", results}}.dump(2) + "\n";

  if (no_rerun) {
    if (!report_path.empty()) atomic_write(report_path, core);
    return all ? 0 : 1;
  }

  // 10: a second full run in a fresh process must reproduce the report byte for byte
  const char* tmpdir = std::getenv("TMPDIR");
  const std::string rerun_path = (report_path.empty() ? std::string(tmpdir ? tmpdir : "/tmp") + "/declab_acceptance"
                                                      : report_path) + ".rerun";
  const std::string cmd = "\"" + self_path(argv[0]) + "\" --no-rerun --report \"" + rerun_path + "\"";
  const int status = std::system(cmd.c_str());
  bool same = false;
  try {
    same = read_file(rerun_path) == core;
  } catch (const std::exception&) {
    same = false;
  }
  std::remove(rerun_path.c_str());
  const bool det = same && (status == 0) == all;
  all = all && det;
  std::cout << (det ? "PASS" : "FAIL") << " 10 oracle determinism {\"byte_identical\":" << (same ? "true" : "false") << "}"
            << std::endl;

  if (!report_path.empty()) {
    json doc = json::parse(core);
    doc["determinism"] = {{"id", 10}, {"pass", det}, {"byte_identical", same}};
    atomic_write(report_path, doc.dump(2) + "\n");
  }
  return all ? 0 : 1;
}
