#pragma once

// Ground-truth moments of the Durrmeyer weights and operator.
//
// For k >= 1 and z = k beta, the integral moments of the basis are
//   <L_{n,k}, t^r> = e^{-z} / (k n^{r+1}) * sum_{s<k} (k-s)_{r+1} z^s / s!,
// where (y)_{m} is the rising factorial. Expanding (k-s)_{r+1} with unsigned
// Stirling numbers gives sum_j c(r+1, j) theta_{j-1}(z) with
//   theta_m(z) = sum_{s<k} (k-s)^{m+1} z^s / s!.
// The ratio P_r(k) = <L_k, t^r> / <L_k, 1> is free of e^{-z}, hence rational
// whenever beta is. For k = 0 the basis is e^{-n t} and P_r(0) = r! / n^r.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "durr/basis.hpp"
#include "durr/numerics.hpp"
#include "durr/quadrature.hpp"

namespace durr {

enum class MomentMethod { stirling_sum, recurrence, quadrature };

std::string_view to_string(MomentMethod method);
/// Accepts "stirling-sum", "recurrence", "quadrature" (underscores allowed).
MomentMethod parse_moment_method(std::string_view text);

struct MomentValue {
  double value = 0.0;
  std::optional<Rational> exact;
  double abs_error_bound = 0.0;
  bool saturated = false;
};

/// theta_m(x) = sum_{s=0}^{k-1} (k-s)^{m+1} x^s / s!. Throws DomainError for k < 1.
Rational theta(std::int64_t k, const Rational& x, int m);
double theta(std::int64_t k, double x, int m);

/// e^{-x} theta_m(x), finite for any x >= 0.
double scaled_theta(std::int64_t k, double x, int m);

/// S_r(x) = theta_r(x) / theta_0(x).
Rational s_ratio_exact(std::int64_t k, const Rational& x, int r);
double s_ratio_exact(std::int64_t k, double x, int r);

/// <L_{n,k}, t^r> by the selected route. stirling_sum evaluates the finite
/// Stirling-weighted theta sum; recurrence starts from the r = 0, 1 sums and
/// advances n^2 I_{r+1} = n((1-beta)k + r + 1) I_r + (r+1) beta k I_{r-1};
/// quadrature integrates the weight adaptively on [0, inf).
MomentValue basis_raw_moment(const OperatorParams& params, std::int64_t k, int r,
                             MomentMethod method);

/// <L_{n,k}, t^r> through the Tricomi U representation
///   (k beta)^{k+r+1} e^{-k beta} (r+1)! U(r+2, k+r+2, k beta) / (k! n^{r+1}).
/// Requires k >= 1 and beta > 0 (DomainError otherwise).
MomentValue basis_raw_moment_tricomi(const OperatorParams& params, std::int64_t k, int r);

/// e^{k beta} <L_{n,k}, t^r> as an exact rational; requires params.exact_beta.
Rational scaled_raw_moment_exact(const OperatorParams& params, std::int64_t k, int r);

/// P_r(k) = <L_k, t^r> / <L_k, 1>, assembled as n^{-r} sum_j c(r+1, j) S_{j-1}.
/// Exact (exact member set) when params carry an exact beta.
MomentValue p_exact(const OperatorParams& params, std::int64_t k, int r);

/// P_0..P_{r_max} from P_0 = 1, P_1 = p_exact and the three-term recurrence
///   n^2 P_{r+2} = n((1-beta)k + r + 2) P_{r+1} + (r+2) beta k P_r.
std::vector<MomentValue> p_recurrence(const OperatorParams& params, std::int64_t k, int r_max);

/// Float P_r(k) for all r <= r_max, cached by k. Serves the operator-moment
/// series, which need P_r(k) for every k up to the truncation index.
/// Not thread-safe: the cache grows on demand.
class MomentTable {
 public:
  MomentTable(const OperatorParams& params, int r_max);

  const OperatorParams& params() const noexcept { return params_; }
  int r_max() const noexcept { return r_max_; }

  /// P_r(k); extends the cache up to k.
  double ratio(std::int64_t k, int r);

  /// P_0(k)..P_{r_max}(k) without touching the cache.
  std::vector<double> compute_row(std::int64_t k) const;

  /// T_{n,r}(x) = sum_k P_r(k) L_{n,k}(x).
  MomentValue operator_moment(int r, double x, const TruncationPolicy& policy = {});

  /// mu_{n,r}(x) = sum_j C(r, j) (-x)^{r-j} T_{n,j}(x).
  MomentValue central_moment(int r, double x, const TruncationPolicy& policy = {});

  /// T_{n,0..r}(x) from a single pass over k.
  std::vector<MomentValue> operator_moments(int r, double x, const TruncationPolicy& policy = {});

 private:
  void extend_to(std::int64_t k);

  OperatorParams params_;
  int r_max_;
  std::vector<double> rows_;  // row-major, (r_max_ + 1) entries per k
  std::int64_t cached_ = 0;
};

MomentValue t_series(const OperatorParams& params, int r, double x, const TruncationPolicy& policy = {});

MomentValue central_moment_series(const OperatorParams& params, int r, double x,
                                  const TruncationPolicy& policy = {});

}  // namespace durr
