#include "durr/basis.hpp"

#include <cmath>
#include <limits>

#include "durr/compensated.hpp"

namespace durr {

OperatorParams::OperatorParams(int n_, double beta_) : n(n_), beta(beta_) { validate(); }

OperatorParams::OperatorParams(int n_, const Rational& beta_)
    : n(n_), beta(to_double(beta_)), exact_beta(beta_) {
  validate();
}

void OperatorParams::validate() const {
  if (n < 1) throw DomainError("operator index n must be >= 1, got " + std::to_string(n));
  if (exact_beta) {
    if (*exact_beta < 0 || *exact_beta >= 1) {
      throw DomainError("beta must lie in [0, 1), got " + to_string(*exact_beta));
    }
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in [0, 1), got " + std::to_string(beta));
  }
}

void TruncationPolicy::validate() const {
  if (!(mass_tol > 0.0 && mass_tol < 1.0)) throw DomainError("mass_tol must lie in (0, 1)");
  if (hard_cap < 1) throw DomainError("hard_cap must be >= 1");
}

double basis_log_value(const OperatorParams& params, std::int64_t k, double x) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (x < 0.0) throw DomainError("basis evaluated at negative x");
  if (x == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double lambda = params.n * x;
  if (k == 0) return -lambda;
  // With m = n x + k beta the basis is (lambda / m) times the Poisson mass
  // m^k e^{-m} / k!, which has an accurate saddle-point evaluation.
  const double m = lambda + static_cast<double>(k) * params.beta;
  return std::log(lambda / m) + log_poisson_pmf(k, m);
}

double basis_value(const OperatorParams& params, std::int64_t k, double x) {
  return std::exp(basis_log_value(params, k, x));
}

double basis_index_mean(const OperatorParams& params, double x) {
  return params.n * x / (1.0 - params.beta);
}

double basis_index_sd(const OperatorParams& params, double x) {
  return std::sqrt(params.n * x) / std::pow(1.0 - params.beta, 1.5);
}

Truncation truncation_index(const OperatorParams& params, double x, const TruncationPolicy& policy) {
  params.validate();
  policy.validate();
  if (x < 0.0) throw DomainError("truncation_index: negative x");
  if (x == 0.0) return {0, 1.0, false};

  const double target = 1.0 - policy.mass_tol;
  const double mean = basis_index_mean(params, x);
  // Scanning is sequential, so the initial guess only sets where the
  // saturation test starts to apply.
  const double guess = mean + 12.0 * basis_index_sd(params, x) + 50.0;
  CompensatedSum mass;
  for (std::int64_t k = 0; k <= policy.hard_cap; ++k) {
    const double term = basis_value(params, k, x);
    mass += term;
    const double current = mass.value();
    if (current >= target) return {k, current, false};
    if (static_cast<double>(k) > guess && term < 1e-18 * current) {
      // Past the bulk with negligible terms: rounding keeps the mass below
      // the target for good.
      return {k, current, true};
    }
  }
  return {policy.hard_cap, mass.value(), true};
}

double basis_mass(const OperatorParams& params, double x, std::int64_t k_max) {
  CompensatedSum mass;
  for (std::int64_t k = 0; k <= k_max; ++k) mass += basis_value(params, k, x);
  return mass.value();
}

}  // namespace durr
