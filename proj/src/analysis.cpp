#include "durr/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "durr/moments.hpp"
#include "durr/operators.hpp"

namespace durr {

namespace {

// Number of whole steps of size h in length, tolerant of representation error.
std::size_t whole_steps(double length, double h) {
  return static_cast<std::size_t>(std::floor(length / h + 1e-9));
}

double binomial_coefficient(int m, int i) {
  double c = 1.0;
  for (int j = 1; j <= i; ++j) c = c * (m - i + j) / j;
  return c;
}

}  // namespace

Grid Grid::uniform(double a, double b, double h) {
  Grid grid;
  grid.a = a;
  grid.b = b;
  grid.h = h;
  if (!(h > 0.0) || !(b >= a)) throw DomainError("grid needs a <= b and h > 0");
  const std::size_t steps = whole_steps(b - a, h);
  for (std::size_t i = 0; i <= steps; ++i) grid.points.push_back(std::min(b, a + static_cast<double>(i) * h));
  if (b - grid.points.back() > 1e-9 * h) grid.points.push_back(b);
  grid.validate();
  return grid;
}

Grid Grid::with_points(double a, double b, std::size_t count) {
  if (count < 2) throw DomainError("grid needs at least two points");
  Grid grid = uniform(a, b, (b - a) / static_cast<double>(count - 1));
  grid.points.resize(count);
  grid.points.back() = b;
  return grid;
}

void Grid::validate() const {
  if (!(a >= 0.0)) throw DomainError("grid must lie in [0, inf)");
  if (!(b >= a) || !(h > 0.0)) throw DomainError("grid needs a <= b and h > 0");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < a || points[i] > b) throw DomainError("grid point outside [a, b]");
    if (i > 0 && !(points[i] > points[i - 1])) throw DomainError("grid points must increase strictly");
  }
}

double ModulusProfile::at(double delta) const {
  const std::size_t steps = whole_steps(delta, step);
  if (steps == 0) throw DomainError("no grid step h <= delta");
  if (steps > sup_by_step.size()) throw DomainError("delta exceeds the profile range");
  return *std::max_element(sup_by_step.begin(), sup_by_step.begin() + static_cast<std::ptrdiff_t>(steps));
}

ModulusProfile modulus_profile(const FunctionSpec& f, int m, double delta_max, const Grid& grid) {
  if (m < 1) throw DomainError("modulus order must be >= 1");
  grid.validate();
  const double h = grid.h;
  const std::size_t max_steps = whole_steps(delta_max, h);
  if (max_steps == 0) throw DomainError("no grid step h <= delta");
  const std::size_t base = whole_steps(grid.b - grid.a, h);
  // f on the lattice a + i h, far enough out for x + m J h.
  std::vector<double> samples(base + static_cast<std::size_t>(m) * max_steps + 1);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = f(grid.a + static_cast<double>(i) * h);
  std::vector<double> weights(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) weights[static_cast<std::size_t>(i)] = ((m - i) % 2 ? -1.0 : 1.0) * binomial_coefficient(m, i);

  ModulusProfile profile;
  profile.order = m;
  profile.step = h;
  profile.sup_by_step.assign(max_steps, 0.0);
  for (std::size_t j = 1; j <= max_steps; ++j) {
    double sup = 0.0;
    for (std::size_t x = 0; x <= base; ++x) {
      double diff = 0.0;
      for (int i = 0; i <= m; ++i) diff += weights[static_cast<std::size_t>(i)] * samples[x + static_cast<std::size_t>(i) * j];
      sup = std::max(sup, std::abs(diff));
    }
    profile.sup_by_step[j - 1] = sup;
  }
  return profile;
}

double modulus(const FunctionSpec& f, int m, double delta, const Grid& grid) {
  if (!(delta > 0.0)) throw DomainError("delta must be > 0");
  return modulus_profile(f, m, delta, grid).at(delta);
}

double delta_n(const OperatorParams& params, double x) {
  const double n = params.n;
  const double c = 1.0 - params.beta;
  return 2.0 * x / (n * c) + 2.0 / (n * n * c) + 1.0 / (n * n * c * c);
}

bool KorovkinReport::monotone(int i) const {
  for (std::size_t j = 1; j < rows.size(); ++j) {
    // e0 sits at rounding level; only growth above it counts.
    if (rows[j].distance[i] > rows[j - 1].distance[i] && rows[j].distance[i] > e0_tol) return false;
  }
  return true;
}

bool KorovkinReport::passed() const {
  if (rows.empty()) return false;
  for (const auto& row : rows) {
    if (row.saturated || !(row.distance[0] <= e0_tol)) return false;
  }
  return monotone(1) && monotone(2) && rows.back().distance[1] <= final_tol && rows.back().distance[2] <= final_tol;
}

KorovkinReport korovkin_check(double beta, const Grid& grid, const std::vector<int>& n_list, double final_tol,
                              const TruncationPolicy& policy) {
  grid.validate();
  KorovkinReport report;
  report.beta = beta;
  report.grid = grid;
  report.final_tol = final_tol;
  for (int n : n_list) {
    const OperatorParams params(n, beta);
    MomentTable table(params, 2);
    KorovkinRow row;
    row.n = n;
    for (double x : grid.points) {
      const auto t = table.operator_moments(2, x, policy);
      double power = 1.0;
      for (int i = 0; i < 3; ++i) {
        row.distance[i] = std::max(row.distance[i], std::abs(t[static_cast<std::size_t>(i)].value - power));
        row.saturated = row.saturated || t[static_cast<std::size_t>(i)].saturated;
        power *= x;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::pair<double, double> derivatives(const FunctionSpec& f, double x) {
  const auto d1 = f.derivative(x, 1);
  const auto d2 = f.derivative(x, 2);
  if (d1 && d2) return {*d1, *d2};
  constexpr double h = 1e-4;
  if (x < h) throw DomainError("finite differences need x >= 1e-4");
  try {
    auto first = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    auto second = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
    const double g1 = (4.0 * first(h / 2) - first(h)) / 3.0;
    const double g2 = (4.0 * second(h / 2) - second(h)) / 3.0;
    if (!std::isfinite(g1) || !std::isfinite(g2)) throw DomainError("non-finite finite difference");
    return {g1, g2};
  } catch (const EvalError& e) {
    throw DomainError(std::string("finite differences failed: ") + e.what());
  }
}

std::vector<double> VoronovskajaReport::gaps() const {
  std::vector<double> out;
  for (double e : scaled_errors) out.push_back(std::abs(e - formula));
  return out;
}

bool VoronovskajaReport::gap_decreasing(double floor) const {
  const auto g = gaps();
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] < g[i - 1]) && g[i] > floor) return false;
  }
  return true;
}

VoronovskajaReport voronovskaja(const FunctionSpec& f, double x, double beta, const std::vector<int>& n_list,
                                const TruncationPolicy& policy, const QuadratureConfig& quad) {
  if (!(x > 0.0)) throw DomainError("the Voronovskaja check needs x > 0");
  if (n_list.size() < 2) throw DomainError("need at least two n values");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] != 2 * n_list[i - 1]) throw DomainError("n list must double at each step");
  }
  VoronovskajaReport report;
  report.f = f.name();
  report.x = x;
  report.beta = beta;
  report.n_list = n_list;
  report.derivatives_analytic = f.derivative(x, 1).has_value() && f.derivative(x, 2).has_value();
  const auto [d1, d2] = derivatives(f, x);
  report.formula = (d1 + x * d2) / (1.0 - beta);
  const double fx = f(x);
  for (int n : n_list) {
    const OperatorParams params(n, beta);
    double value = 0.0;
    if (const auto r = f.monomial_order()) {
      value = t_series(params, *r, x, policy).value;
    } else {
      DurrmeyerOperator op(params, f, quad, policy);
      value = op.apply(x);
    }
    report.scaled_errors.push_back(n * (value - fx));
  }
  for (std::size_t i = 1; i < report.scaled_errors.size(); ++i) {
    report.extrapolated.push_back(2.0 * report.scaled_errors[i] - report.scaled_errors[i - 1]);
  }
  report.limit = report.extrapolated.back();
  report.gap = std::abs(report.limit - report.formula);
  return report;
}

bool BoundReport::holds_with(double c, double tol) const {
  for (const auto& p : points) {
    if (p.lhs > c * p.omega2_term + p.omega_term + tol) return false;
  }
  return true;
}

BoundReport bound_check(const FunctionSpec& f, const OperatorParams& params, const Grid& grid, double modulus_step,
                        const TruncationPolicy& policy, const QuadratureConfig& quad) {
  grid.validate();
  params.validate();
  BoundReport report;
  report.f = f.name();
  report.grid = grid;
  report.n = params.n;
  report.beta = params.beta;

  const Grid domain = Grid::uniform(0.0, grid.b + 1.0, modulus_step);
  const double shift = 1.0 / (params.n * (1.0 - params.beta));
  // Step for the first modulus divides the shift exactly, so the largest
  // admissible h is the shift itself rather than a truncation of it.
  const double omega_step = shift / std::ceil(shift / modulus_step - 1e-9);
  const double omega_term = modulus(f, 1, shift, Grid::uniform(0.0, grid.b + 1.0, omega_step));
  const ModulusProfile second = modulus_profile(f, 2, std::sqrt(delta_n(params, grid.b)), domain);

  DurrmeyerOperator op(params, f, quad, policy);
  for (double x : grid.points) {
    BoundPoint p;
    p.x = x;
    p.lhs = std::abs(op.apply(x) - f(x));
    p.omega2_term = second.at(std::sqrt(delta_n(params, x)));
    p.omega_term = omega_term;
    report.lhs_sup = std::max(report.lhs_sup, p.lhs);
    if (p.omega2_term > 0.0) {
      report.minimal_c = std::max(report.minimal_c, (p.lhs - p.omega_term) / p.omega2_term);
    } else if (p.lhs > p.omega_term) {
      p.inconclusive = true;
      ++report.inconclusive;
    }
    report.points.push_back(p);
  }
  return report;
}

bool OrderReport::passed() const {
  if (std::count(below_noise.begin(), below_noise.end(), false) < 2) return false;
  return slope <= threshold;
}

OrderReport order_check(int r, double beta, double x, const std::vector<int>& n_list, const TruncationPolicy& policy) {
  if (r < 1) throw DomainError("order check needs r >= 1");
  if (!(x > 0.0)) throw DomainError("order check needs x > 0");
  OrderReport report;
  report.r = r;
  report.beta = beta;
  report.x = x;
  report.n_list = n_list;
  report.threshold = -static_cast<double>((r + 1) / 2) + 0.15;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int n : n_list) {
    const MomentValue mu = central_moment_series(OperatorParams(n, beta), r, x, policy);
    report.mu.push_back(mu.value);
    const bool noisy = !(std::abs(mu.value) > 16.0 * mu.abs_error_bound);
    report.below_noise.push_back(noisy);
    if (noisy) continue;
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(std::abs(mu.value));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count >= 2) report.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return report;
}

}  // namespace durr
