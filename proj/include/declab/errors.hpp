#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace declab {

// Precondition violations. The CLI maps these to exit code 2.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failures (non-convergence, precision loss, failed cross-checks). Exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a requested job exceeds a memory or overflow guard. Exit code 4.
struct ResourceGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : NumericalError {
  QuadratureError(const std::string& what, std::vector<std::complex<double>> previous,
                  std::vector<std::complex<double>> last)
      : NumericalError(what), previous_iterate(std::move(previous)), last_iterate(std::move(last)) {}
  std::vector<std::complex<double>> previous_iterate;
  std::vector<std::complex<double>> last_iterate;
};

}  // namespace declab
