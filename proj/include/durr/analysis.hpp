#pragma once

// Numerical checks of the approximation theorems for D_n: Korovkin
// convergence, the Voronovskaja limit, moduli of continuity, the direct
// estimate and the decay order of the central moments.

#include <optional>
#include <string>
#include <vector>

#include "durr/basis.hpp"
#include "durr/function.hpp"
#include "durr/quadrature.hpp"

namespace durr {

/// Uniform grid on [a, b] with step h; the last point is b.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  double h = 1e-3;
  std::vector<double> points;

  static Grid uniform(double a, double b, double h);
  static Grid with_points(double a, double b, std::size_t count);

  void validate() const;
};

/// sup over x in the grid of |Delta_{j h}^m f(x)| for every step j = 1..J,
/// where h is the grid step. Samples of f past b are taken as needed.
struct ModulusProfile {
  int order = 1;
  double step = 0.0;
  std::vector<double> sup_by_step;  // entry j - 1 is the sup for step j * step

  /// omega_m(f, delta) on the grid: the max over steps j * step <= delta.
  /// Throws DomainError when delta < step.
  double at(double delta) const;
};

ModulusProfile modulus_profile(const FunctionSpec& f, int m, double delta_max, const Grid& grid);

/// Discrete omega_m(f, delta); a lower bound for the continuous modulus.
double modulus(const FunctionSpec& f, int m, double delta, const Grid& grid);

/// 2x/(n(1-beta)) + 2/(n^2(1-beta)) + 1/(n^2(1-beta)^2).
double delta_n(const OperatorParams& params, double x);

struct KorovkinRow {
  int n = 0;
  double distance[3] = {0.0, 0.0, 0.0};  // sup |D(e_i) - e_i| on the grid
  bool saturated = false;
};

struct KorovkinReport {
  double beta = 0.0;
  Grid grid;
  std::vector<KorovkinRow> rows;
  double e0_tol = 1e-10;
  double final_tol = 0.0;

  /// Distance for e_i is nonincreasing along the n list.
  bool monotone(int i) const;
  /// e0 within e0_tol at every n, e1 and e2 within final_tol at the last n,
  /// and both monotone.
  bool passed() const;
};

KorovkinReport korovkin_check(double beta, const Grid& grid, const std::vector<int>& n_list, double final_tol,
                              const TruncationPolicy& policy = {});

struct VoronovskajaReport {
  std::string f;
  double x = 0.0;
  double beta = 0.0;
  std::vector<int> n_list;
  std::vector<double> scaled_errors;  // n (D(f, x) - f(x))
  std::vector<double> extrapolated;   // 2 e_{2n} - e_n for consecutive pairs
  double limit = 0.0;                 // last extrapolated value
  double formula = 0.0;               // (f'(x) + x f''(x)) / (1 - beta)
  double gap = 0.0;                   // |limit - formula|
  bool derivatives_analytic = true;

  /// |scaled_errors[i] - formula| along n_list.
  std::vector<double> gaps() const;
  /// The gaps decrease strictly, or are already at rounding level.
  bool gap_decreasing(double floor = 1e-9) const;
};

/// First and second derivative of f at x: analytic for builtins, else
/// central differences with step 1e-4 and one Richardson step.
std::pair<double, double> derivatives(const FunctionSpec& f, double x);

VoronovskajaReport voronovskaja(const FunctionSpec& f, double x, double beta, const std::vector<int>& n_list,
                                const TruncationPolicy& policy = {}, const QuadratureConfig& quad = {});

struct BoundPoint {
  double x = 0.0;
  double lhs = 0.0;           // |D(f, x) - f(x)|
  double omega2_term = 0.0;   // omega_2(f, sqrt(delta_n(x)))
  double omega_term = 0.0;    // omega(f, 1/(n(1-beta)))
  bool inconclusive = false;  // omega2_term == 0 but lhs > omega_term
};

struct BoundReport {
  std::string f;
  Grid grid;
  int n = 0;
  double beta = 0.0;
  std::vector<BoundPoint> points;
  double lhs_sup = 0.0;
  double minimal_c = 0.0;  // sup of (lhs - omega_term) / omega2_term, at least 0
  std::size_t inconclusive = 0;

  /// The inequality holds at every point with constant c, up to tol.
  bool holds_with(double c, double tol = 1e-12) const;
};

/// Evaluates D_n on `grid`; moduli are taken on [0, b + 1] with step
/// modulus_step.
BoundReport bound_check(const FunctionSpec& f, const OperatorParams& params, const Grid& grid,
                        double modulus_step = 1e-3, const TruncationPolicy& policy = {},
                        const QuadratureConfig& quad = {});

struct OrderReport {
  int r = 0;
  double beta = 0.0;
  double x = 0.0;
  std::vector<int> n_list;
  std::vector<double> mu;
  std::vector<bool> below_noise;  // |mu| within 16x its error bound
  double slope = 0.0;             // least squares over the points above the noise floor
  double threshold = 0.0;         // -floor((r + 1) / 2) + 0.15

  bool passed() const;
};

OrderReport order_check(int r, double beta, double x, const std::vector<int>& n_list,
                        const TruncationPolicy& policy = {});

}  // namespace durr
