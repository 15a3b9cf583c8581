#include "declab/circle_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "declab/errors.hpp"

namespace declab {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw InvalidArgument("isqrt of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

LatticeCircle enumerate_circle_points(std::int64_t R) {
  if (R < 1) throw InvalidArgument("R must be >= 1");
  if (R >= (std::int64_t{1} << 62)) throw ResourceGuard("R must be below 2^62");
  LatticeCircle lc;
  lc.R = R;
  const std::int64_t s = isqrt(R);
  for (std::int64_t x = -s; x <= s; ++x) {
    const std::int64_t rest = R - x * x;
    const std::int64_t y = isqrt(rest);
    if (y * y != rest) continue;
    lc.points.push_back({x, -y});
    if (y != 0) lc.points.push_back({x, y});
  }
  std::sort(lc.points.begin(), lc.points.end());
  return lc;
}

std::int64_t r2_divisor_count(std::int64_t R) {
  if (R < 1) throw InvalidArgument("R must be >= 1");
  std::int64_t d1 = 0, d3 = 0;
  auto tally = [&](std::int64_t d) {
    if (d % 4 == 1) ++d1;
    if (d % 4 == 3) ++d3;
  };
  for (std::int64_t d = 1; d * d <= R; ++d) {
    if (R % d) continue;
    tally(d);
    if (d * d != R) tally(R / d);
  }
  return 4 * (d1 - d3);
}

double normalized_separation(const LatticeCircle& lc) {
  if (lc.N() < 2) throw InvalidArgument("separation needs at least two points");
  auto best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t a = 0; a < lc.points.size(); ++a)
    for (std::size_t b = a + 1; b < lc.points.size(); ++b) {
      const std::int64_t dx = lc.points[a].x - lc.points[b].x, dy = lc.points[a].y - lc.points[b].y;
      best = std::min(best, dx * dx + dy * dy);
    }
  const double sep = std::sqrt(static_cast<double>(best) / static_cast<double>(lc.R));
  if (sep * (1 + 1e-12) < 1 / std::sqrt(static_cast<double>(lc.R)))
    throw NumericalError("lattice points closer than 1/sqrt(R)");
  return sep;
}

ArcAssignment assign_points_to_arcs(const LatticeCircle& lc, double tau0, double subarc_width) {
  if (!(tau0 > 0 && tau0 <= 2 * std::numbers::pi)) throw InvalidArgument("tau0 must lie in (0, 2 pi]");
  if (!(subarc_width > 0)) throw InvalidArgument("subarc width must be positive");
  ArcAssignment out;
  out.tau0 = tau0;
  out.subarc_width = subarc_width;
  out.arcs = static_cast<std::int64_t>(std::ceil(2 * std::numbers::pi / tau0 - 1e-12));
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> cells;
  for (const auto& pt : lc.points) {
    double phi = std::atan2(static_cast<double>(pt.y), static_cast<double>(pt.x));
    if (phi < 0) phi += 2 * std::numbers::pi;
    if (phi >= 2 * std::numbers::pi) phi = 0;
    auto arc = static_cast<std::int64_t>(std::floor(phi / tau0));
    arc = std::clamp<std::int64_t>(arc, 0, out.arcs - 1);
    const double local = phi - static_cast<double>(arc) * tau0;
    const auto sub = static_cast<std::int64_t>(std::floor(std::sin(std::max(local, 0.0)) / subarc_width));
    out.entries.push_back({pt, arc, sub});
    ++cells[{arc, sub}];
  }
  for (const auto& [key, count] : cells) {
    if (count >= static_cast<std::int64_t>(out.occupancy_histogram.size())) out.occupancy_histogram.resize(count + 1, 0);
    ++out.occupancy_histogram[count];
    out.max_occupancy = std::max(out.max_occupancy, count);
  }
  return out;
}

ArcAssignment assign_points_to_arcs(const LatticeCircle& lc, const LadderParams& ladder) {
  const double half_log_R = 0.5 * std::log(static_cast<double>(lc.R));
  if (ladder.tau_log_inv.back() < half_log_R * (1 - 1e-12))
    throw InvalidArgument("ladder has tau_{N+1} > 1/sqrt(R)");
  const double tau0 = ladder.tau0();
  return assign_points_to_arcs(lc, tau0, std::exp(-ladder.tau_log_inv.back()) * tau0);
}

}  // namespace declab
