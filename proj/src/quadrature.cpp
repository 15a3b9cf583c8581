#include "declab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "declab/errors.hpp"

namespace declab {

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_gl(int n) {
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    x(n - 1 - i) = z;
    w(n - 1 - i) = 2.0 / ((1 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace

const std::pair<Eigen::VectorXd, Eigen::VectorXd>& gauss_legendre(int order) {
  if (order < 2 || order > 512) throw InvalidArgument("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

Eigen::VectorXd gregory_weights(Eigen::Index npts, double h) {
  if (npts < 1) throw InvalidArgument("quadrature needs at least one node");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(npts, h);
  if (npts == 1) {
    w(0) = 0;
  } else if (npts >= 12) {
    const double c[6] = {19087.0 / 60480, 84199.0 / 60480, 18869.0 / 30240,
                         37621.0 / 30240, 55031.0 / 60480, 61343.0 / 60480};
    for (int k = 0; k < 6; ++k) {
      w(k) = c[k] * h;
      w(npts - 1 - k) = c[k] * h;
    }
  } else if (npts >= 8) {
    const double c[3] = {3.0 / 8, 7.0 / 6, 23.0 / 24};
    for (int k = 0; k < 3; ++k) {
      w(k) = c[k] * h;
      w(npts - 1 - k) = c[k] * h;
    }
  } else if (npts % 2 == 1) {
    for (Eigen::Index k = 0; k < npts; ++k) w(k) = (k == 0 || k == npts - 1) ? h / 3 : (k % 2 ? 4 * h / 3 : 2 * h / 3);
  } else {
    w(0) = w(npts - 1) = h / 2;
  }
  return w;
}

}  // namespace declab
