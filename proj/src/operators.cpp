#include "durr/operators.hpp"

#include <algorithm>
#include <cmath>

#include "durr/compensated.hpp"

namespace durr {

QuadratureFailure::QuadratureFailure(std::int64_t k, double achieved)
    : AccuracyError("inner integral for basis index k = " + std::to_string(k) + " missed its tolerance", achieved),
      k_(k) {}

double jain_apply(const OperatorParams& params, const FunctionSpec& f, double x, const TruncationPolicy& policy) {
  params.validate();
  if (x < 0.0) throw DomainError("operators are defined for x >= 0");
  if (x == 0.0) return f(0.0);
  const Truncation truncation = truncation_index(params, x, policy);
  const double n = params.n;
  const GrowthClass& growth = f.growth();
  CompensatedSum sum;
  std::int64_t k = 0;
  for (; k <= truncation.k_max; ++k) {
    const double weight = basis_value(params, k, x);
    if (weight == 0.0) continue;
    sum += weight * f(static_cast<double>(k) / n);
  }
  // Extend while the growth envelope of the next term is still visible.
  while (k <= policy.hard_cap) {
    const double weight = basis_value(params, k, x);
    const double envelope = weight * growth.constant * std::pow(1.0 + static_cast<double>(k) / n, growth.degree);
    if (envelope <= 1e-17 * std::max(std::abs(sum.value()), 1e-300)) break;
    sum += weight * f(static_cast<double>(k) / n);
    ++k;
  }
  return sum.value();
}

DurrmeyerOperator::DurrmeyerOperator(const OperatorParams& params, FunctionSpec f, const QuadratureConfig& quad,
                                     const TruncationPolicy& policy)
    : params_(params), f_(std::move(f)), quad_(quad), policy_(policy) {
  params_.validate();
  quad_.validate();
  policy_.validate();
}

double DurrmeyerOperator::coefficient(std::int64_t k) {
  if (k < 0) throw DomainError("basis index must be >= 0");
  if (static_cast<std::size_t>(k) < cache_.size() && cache_[static_cast<std::size_t>(k)]) {
    return *cache_[static_cast<std::size_t>(k)];
  }
  const double n = params_.n;
  const double kd = static_cast<double>(k);
  const double one_minus = 1.0 - params_.beta;
  const double u_mode =
      k == 0 ? 0.0 : 0.5 * (kd * one_minus + std::sqrt(kd * kd * one_minus * one_minus + 4.0 * kd * params_.beta));
  const double spread = std::sqrt(kd + 1.0);
  std::vector<double> breakpoints;
  for (double offset : {-8.0, -3.0, 0.0, 3.0, 8.0, 20.0}) {
    const double u = u_mode + offset * spread;
    if (u > 0.0) breakpoints.push_back(u / n);
  }
  for (double kink : f_.kinks()) breakpoints.push_back(kink);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  // Weight scaled to 1 at its mode; the scale cancels in the ratio.
  const double t_ref = std::max(u_mode, 0.5) / n;
  const double log_ref = basis_log_value(params_, k, t_ref);
  auto weight = [&](double t) {
    if (t < 0.0) return 0.0;
    if (t == 0.0) return k == 0 ? std::exp(-log_ref) : 0.0;
    return std::exp(basis_log_value(params_, k, t) - log_ref);
  };
  const QuadratureResult mass = integrate_semi_infinite(weight, breakpoints, quad_);
  const QuadratureResult moment =
      integrate_semi_infinite([&](double t) { const double w = weight(t); return w == 0.0 ? 0.0 : w * f_(t); },
                              breakpoints, quad_);
  if (!mass.converged) throw QuadratureFailure(k, mass.abs_error);
  if (!moment.converged) throw QuadratureFailure(k, moment.abs_error);
  const double value = moment.value / mass.value;
  if (cache_.size() <= static_cast<std::size_t>(k)) cache_.resize(static_cast<std::size_t>(k) + 1);
  cache_[static_cast<std::size_t>(k)] = value;
  return value;
}

double DurrmeyerOperator::growth_bound(std::int64_t k) const {
  const GrowthClass& growth = f_.growth();
  // The k-th weight in t concentrates around (k + 1) / n.
  return growth.constant * std::pow(1.0 + (static_cast<double>(k) + 2.0) / params_.n, growth.degree);
}

double DurrmeyerOperator::apply(double x) {
  if (x < 0.0) throw DomainError("operators are defined for x >= 0");
  if (x == 0.0) return coefficient(0);
  const Truncation truncation = truncation_index(params_, x, policy_);
  std::vector<double> weights;
  double peak = 0.0;
  for (std::int64_t k = 0; k <= truncation.k_max; ++k) {
    weights.push_back(basis_value(params_, k, x));
    peak = std::max(peak, weights.back());
  }
  CompensatedSum sum;
  for (std::int64_t k = 0; k <= truncation.k_max; ++k) {
    const double w = weights[static_cast<std::size_t>(k)];
    if (w < 1e-18 * peak) continue;
    sum += w * coefficient(k);
  }
  for (std::int64_t k = truncation.k_max + 1; k <= policy_.hard_cap; ++k) {
    const double w = basis_value(params_, k, x);
    if (w * growth_bound(k) <= 1e-17 * std::max(std::abs(sum.value()), 1e-300)) break;
    sum += w * coefficient(k);
  }
  return sum.value();
}

double DurrmeyerOperator::apply_auxiliary(double x) {
  const double shift = 1.0 / (params_.n * (1.0 - params_.beta));
  return apply(x) - f_(x + shift) + f_(x);
}

double durrmeyer_apply(const OperatorParams& params, const FunctionSpec& f, double x, const TruncationPolicy& policy,
                       const QuadratureConfig& quad) {
  DurrmeyerOperator op(params, f, quad, policy);
  return op.apply(x);
}

double auxiliary_apply(const OperatorParams& params, const FunctionSpec& f, double x, const TruncationPolicy& policy,
                       const QuadratureConfig& quad) {
  DurrmeyerOperator op(params, f, quad, policy);
  return op.apply_auxiliary(x);
}

}  // namespace durr
