#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "declab/curve.hpp"
#include "declab/density.hpp"
#include "declab/geometry_weights.hpp"

namespace declab {

using FieldMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tensor grid of nodes origin + (i hx, j hy), 0 <= i < nx, 0 <= j < ny.
struct Grid {
  Point origin = Point::Zero();
  double spacing = 0.25;    // hx
  double spacing_y = 0.25;  // hy
  Eigen::Index nx = 0, ny = 0;

  double x(Eigen::Index i) const { return origin.x() + static_cast<double>(i) * spacing; }
  double y(Eigen::Index j) const { return origin.y() + static_cast<double>(j) * spacing_y; }
  Eigen::VectorXd xs() const;
  Eigen::VectorXd ys() const;
  Point node(Eigen::Index i, Eigen::Index j) const { return {x(i), y(j)}; }

  // Nodes over factor*B. The number of intervals across B is the smallest multiple of 16 with spacing
  // <= max_spacing, so sub-squares k/8 * B for integer k are node-aligned.
  static Grid covering(const SquareRegion& B, double max_spacing, double factor = 1.0);
  static Grid rectangle(Point lo, Point hi, double max_hx, double max_hy);
};

struct NodeRange {
  Eigen::Index i0 = 0, i1 = 0, j0 = 0, j1 = 0;  // inclusive
  Eigen::Index cols() const { return i1 - i0 + 1; }
  Eigen::Index rows() const { return j1 - j0 + 1; }
};

// Nodes covering a sub-square; its boundary must sit on grid lines.
NodeRange node_range(const Grid& grid, const SquareRegion& sq);

struct SampledField {
  Grid grid;
  FieldMatrix values;  // values(j, i) at grid.node(i, j)
  SquareRegion square;

  cdouble at(Eigen::Index i, Eigen::Index j) const { return values(j, i); }
};

// Frequencies and amplitudes of sum_k c_k e(f1_k x1 + f2_k x2).
struct PlaneWaves {
  Eigen::VectorXd f1, f2;
  Eigen::VectorXcd c;
  Eigen::Index size() const { return c.size(); }
  void append(const PlaneWaves& o);
};

FieldMatrix evaluate_plane_waves(const PlaneWaves& w, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);
cdouble evaluate_plane_waves_at(const PlaneWaves& w, const Point& x);

struct QuadratureOptions {
  int order = 32;                 // Gauss-Legendre points per panel
  double cycles_per_panel = 12.0;  // initial resolution
  double tolerance = 1e-8;        // relative sampled sup difference between doublings
  int max_doublings = 20;
};

struct QuadratureRule {
  PlaneWaves waves;  // nodes with weights and density values folded into c, plus atoms
  std::int64_t panels = 0;
  int doublings = 0;
  double estimated_error = 0;  // relative sampled sup difference at acceptance
};

// Representative points for the doubling check: corners, edge midpoints, centre and hashed interior nodes.
std::vector<Point> sample_points(const Grid& grid);

QuadratureRule build_rule(const DensityFunction& g, const Interval& J, const CurveSpec& curve,
                          const std::vector<Point>& samples, const QuadratureOptions& opts = {});

// Field of E_J g over factor*B (factor >= 1 for weighted norms), square = B.
SampledField evaluate_extension(const DensityFunction& g, const Interval& J, const CurveSpec& curve, const SquareRegion& B,
                                double spacing, double factor = 1.0, const QuadratureOptions& opts = {});

// Direct pointwise value, for oracles.
cdouble extension_at(const DensityFunction& g, const Interval& J, const CurveSpec& curve, const Point& x,
                     const QuadratureOptions& opts = {});

struct NormMode {
  enum class Kind { plain, normalized, weighted } kind = Kind::plain;
  WeightKind weight{};
  double power = 1.0;       // weight^power
  bool average = false;     // divide by |B| in weighted mode
  double extent = 0.0;      // weighted integration square = extent * B; 0 picks it from the tail tolerance

  static NormMode plain() { return {}; }
  static NormMode normalized() { return {Kind::normalized}; }
  static NormMode weighted(WeightKind kind = {}, double power = 1.0, bool average = false) {
    return {Kind::weighted, kind, power, average};
  }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Smallest k/8 (k = 1..64) with weight_tail_fraction(kind, power, k/16) <= tol; 8 when none qualifies.
double choose_extent(const WeightKind& kind, double power, double tol = 1e-12);

// int |f|^p (times weight^power) over the mode's region, without the 1/p root or the average.
double lp_integral(const SampledField& f, double p, const NormMode& mode);
double lp_norm(const SampledField& f, double p, const NormMode& mode);
// Bound on the weighted integral discarded outside the integration square, given sup |f| <= sup_bound.
double weighted_tail_bound(const SampledField& f, double p, const NormMode& mode, double sup_bound);

double parabolic_rescale_identity_check(const DensityFunction& g, const Interval& I, double p, const SquareRegion& B,
                                        double spacing, const QuadratureOptions& opts = {});

// f_r(x1, v) = r f(x1, r v), resampled along x2 by 6-point Lagrange interpolation.
SampledField anisotropic_rescale(const SampledField& f, double r);
double anisotropic_rescale_identity_check(double r, double p, const SampledField& f);

double reverse_holder_ratio(const DensityFunction& g, const Interval& J, double p, double q, const SquareRegion& B,
                            double spacing = 0.25, const WeightKind& weight = {});
double l2_decoupling_ratio(const DensityFunction& g, const Interval& J, const SquareRegion& B, double spacing = 0.25,
                           const WeightKind& weight = {});

}  // namespace declab
