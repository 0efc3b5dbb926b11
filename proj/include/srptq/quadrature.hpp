#pragma once

#include <cstddef>
#include <functional>

namespace srptq {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
  bool converged = true;
};

/// Adaptive Simpson on [a, b]. The tolerance is split between halves so the
/// summed error estimate stays within abs_tol.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opts = {});

/// Integral over [a, inf) of a nonnegative integrand that is eventually
/// decreasing: the upper limit doubles until the integrand falls below
/// `negligible`, then the finite range is integrated.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double negligible = 1e-20,
                                       const QuadratureOptions& opts = {});

}  // namespace srptq
