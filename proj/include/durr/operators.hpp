#pragma once

// The Jain operator B_n, its Durrmeyer variant D_n and the auxiliary
// operator D_n(f, x) - f(x + 1/(n(1-beta))) + f(x), applied to FunctionSpec.

#include <cstdint>
#include <optional>
#include <vector>

#include "durr/basis.hpp"
#include "durr/function.hpp"
#include "durr/quadrature.hpp"

namespace durr {

/// Inner-integral quadrature that failed for basis index k.
class QuadratureFailure : public AccuracyError {
 public:
  QuadratureFailure(std::int64_t k, double achieved);

  std::int64_t k() const noexcept { return k_; }

 private:
  std::int64_t k_;
};

/// B_n(f, x) = sum_k L_{n,k}(x) f(k/n).
double jain_apply(const OperatorParams& params, const FunctionSpec& f, double x,
                  const TruncationPolicy& policy = {});

/// D_n for one (params, f) pair. The averages <L_k, f> / <L_k, 1> do not
/// depend on x, so they are computed once per k and cached; evaluating on an
/// x grid costs one quadrature pair per k overall. Not thread-safe.
class DurrmeyerOperator {
 public:
  DurrmeyerOperator(const OperatorParams& params, FunctionSpec f, const QuadratureConfig& quad = {},
                    const TruncationPolicy& policy = {});

  const OperatorParams& params() const noexcept { return params_; }
  const FunctionSpec& function() const noexcept { return f_; }

  /// <L_k, f> / <L_k, 1>; throws QuadratureFailure when either integral
  /// misses its tolerance.
  double coefficient(std::int64_t k);

  /// D_n(f, x).
  double apply(double x);

  /// D_n(f, x) - f(x + 1/(n(1-beta))) + f(x).
  double apply_auxiliary(double x);

 private:
  double growth_bound(std::int64_t k) const;

  OperatorParams params_;
  FunctionSpec f_;
  QuadratureConfig quad_;
  TruncationPolicy policy_;
  std::vector<std::optional<double>> cache_;
};

double durrmeyer_apply(const OperatorParams& params, const FunctionSpec& f, double x,
                       const TruncationPolicy& policy = {}, const QuadratureConfig& quad = {});

double auxiliary_apply(const OperatorParams& params, const FunctionSpec& f, double x,
                       const TruncationPolicy& policy = {}, const QuadratureConfig& quad = {});

}  // namespace durr
