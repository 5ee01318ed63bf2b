#pragma once

// The generalized Poisson basis
//   L_{n,k}(x) = n x (n x + k beta)^{k-1} e^{-(n x + k beta)} / k!
// and truncation of the infinite sums over k.

#include <cstdint>
#include <optional>

#include "durr/numerics.hpp"

namespace durr {

/// Operator index n and shape beta, optionally with an exact rational beta
/// (which then defines the floating value).
struct OperatorParams {
  int n = 1;
  double beta = 0.0;
  std::optional<Rational> exact_beta;

  OperatorParams() = default;
  OperatorParams(int n_, double beta_);
  OperatorParams(int n_, const Rational& beta_);

  bool is_exact() const noexcept { return exact_beta.has_value(); }

  /// Throws DomainError unless n >= 1 and 0 <= beta < 1.
  void validate() const;
};

struct TruncationPolicy {
  double mass_tol = 1e-12;
  std::int64_t hard_cap = 1'000'000;

  void validate() const;
};

struct Truncation {
  std::int64_t k_max = 0;
  double mass = 0.0;
  /// The cap was hit, or the remaining terms fell below rounding resolution,
  /// before the partial mass reached 1 - mass_tol.
  bool saturated = false;
};

/// ln L_{n,k}(x); -inf for x == 0 and k >= 1, and 0 for x == 0 and k == 0.
double basis_log_value(const OperatorParams& params, std::int64_t k, double x);

/// L_{n,k}(x); 0 on underflow.
double basis_value(const OperatorParams& params, std::int64_t k, double x);

/// Smallest k_max <= hard_cap with sum_{k <= k_max} L_{n,k}(x) >= 1 - mass_tol.
Truncation truncation_index(const OperatorParams& params, double x,
                            const TruncationPolicy& policy = {});

/// sum_{k=0}^{k_max} L_{n,k}(x), compensated.
double basis_mass(const OperatorParams& params, double x, std::int64_t k_max);

/// Mean n x / (1 - beta) and standard deviation sqrt(n x) / (1 - beta)^{3/2}
/// of k under the basis weights at x.
double basis_index_mean(const OperatorParams& params, double x);
double basis_index_sd(const OperatorParams& params, double x);

}  // namespace durr
