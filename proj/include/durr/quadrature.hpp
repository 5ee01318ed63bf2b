#pragma once

#include <functional>
#include <span>

namespace durr {

/// Tolerances for the adaptive Gauss-Kronrod integrator. A run stops when the
/// summed panel error is at most max(abs_tol, rel_tol * |value|).
struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  int max_panels = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive G7/K15 quadrature on a finite interval.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& config);

/// Integral over [a, inf) through the map t = a + u / (1 - u), u in [0, 1).
QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureConfig& config);

/// Integral over [0, inf) split at increasing breakpoints; the last piece is
/// mapped to [0, 1). All pieces share one global panel budget and error target.
QuadratureResult integrate_semi_infinite(const Integrand& f, std::span<const double> breakpoints,
                                         const QuadratureConfig& config);

}  // namespace durr
