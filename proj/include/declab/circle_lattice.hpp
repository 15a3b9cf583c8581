#pragma once

#include <cstdint>
#include <vector>

#include "declab/bounds.hpp"

namespace declab {

struct LatticePoint {
  std::int64_t x = 0, y = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticeCircle {
  std::int64_t R = 1;
  std::vector<LatticePoint> points;  // sorted lexicographically
  std::int64_t N() const { return static_cast<std::int64_t>(points.size()); }
};

std::int64_t isqrt(std::int64_t n);

// x-scan with an integer perfect-square test; R < 2^62.
LatticeCircle enumerate_circle_points(std::int64_t R);
// 4 (d1(R) - d3(R)), an independent count
std::int64_t r2_divisor_count(std::int64_t R);

// min |p - q| / sqrt(R) over distinct pairs; needs N >= 2
double normalized_separation(const LatticeCircle& lc);

struct ArcEntry {
  LatticePoint point;
  std::int64_t arc = 0;
  std::int64_t subarc = 0;
};

struct ArcAssignment {
  double tau0 = 0;
  double subarc_width = 0;
  std::int64_t arcs = 0;  // ceil(2 pi / tau0) arcs of length tau0, the last one shorter
  std::vector<ArcEntry> entries;
  std::vector<std::int64_t> occupancy_histogram;  // [k] = number of occupied subarcs holding k points
  std::int64_t max_occupancy = 0;
  bool occupancy_ok() const { return max_occupancy <= 1; }
};

// Arc of a normalised point: angle in [0, 2 pi), arcs half-open [k tau0, (k+1) tau0). Subarc: horizontal
// coordinate sin(angle - k tau0) in the arc's own frame, cut into cells of subarc_width.
ArcAssignment assign_points_to_arcs(const LatticeCircle& lc, double tau0, double subarc_width);
// tau0 and width tau_{N+1} tau0 from the ladder, which must satisfy tau_{N+1} <= 1/sqrt(R).
ArcAssignment assign_points_to_arcs(const LatticeCircle& lc, const LadderParams& ladder);

}  // namespace declab
