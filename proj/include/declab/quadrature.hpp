#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

namespace declab {

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::pair<Eigen::VectorXd, Eigen::VectorXd>& gauss_legendre(int order);

// Fourth-order end-corrected trapezoid weights for npts equispaced nodes of spacing h.
// Falls back to Simpson or trapezoid for very short grids.
Eigen::VectorXd gregory_weights(Eigen::Index npts, double h);

// SplitMix64 finaliser, used wherever a stable hash of integers is needed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace declab
