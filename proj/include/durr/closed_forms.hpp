#pragma once

// Printed closed forms for the Jain and Durrmeyer moments, transcribed as
// published (including any suspect coefficient), and their comparison with
// the exact engine.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "durr/basis.hpp"
#include "durr/moments.hpp"

namespace durr {

enum class ClosedFamily { jain_B, S_closed, P_closed, T_closed, mu_closed, T_recur };

struct ClosedFormId {
  ClosedFamily family = ClosedFamily::T_closed;
  int order = 0;

  /// Throws UnsupportedOrder when the order is outside the printed table.
  void validate() const;
};

std::string_view to_string(ClosedFamily family);
/// Accepts the enumerator names and the short CLI names B, S, P, T, mu, Trec.
ClosedFamily parse_closed_family(std::string_view text);
/// Largest printed order: B 5, S 4, P 5, T 5, mu 4, T_recur 5.
int max_order(ClosedFamily family);
/// Smallest admissible order: 1 for T_recur, 0 otherwise.
int min_order(ClosedFamily family);
/// Families that are indexed by k rather than by x.
bool indexed_by_k(ClosedFamily family);

/// Printed coefficients A_j^r of the T recurrence, r <= 3, j <= r.
class ACoefficientTable {
 public:
  static constexpr int kMaxOrder = 3;

  /// Throws UnsupportedOrder outside 0 <= j <= r <= 3.
  static double value(int r, int j, double beta);
};

/// Printed Jain moments B_n(t^r, x), r <= 5.
double jain_moment_closed(const OperatorParams& params, int r, double x);

/// B_n(t^r, x) = sum_k L_{n,k}(x) (k/n)^r, summed directly.
MomentValue jain_moment_series(const OperatorParams& params, int r, double x,
                               const TruncationPolicy& policy = {});

/// Printed S_r(beta k), r <= 4 (S_0 = 1).
double s_closed(std::int64_t k, double beta, int r);

/// Printed P_r(k; beta), r <= 5.
double p_closed(const OperatorParams& params, std::int64_t k, int r);

/// Printed T_{n,r}(x), r <= 5.
double t_closed(const OperatorParams& params, int r, double x);

/// T_{n,r}(x) regenerated from the printed recurrence
///   T_r = (x + (2r-1)/(n(1-beta))) T_{r-1}
///         - sum_{j=0}^{r-2} (-1)^j A_j^{r-2} / (n (1-beta))^{j+2} T_{r-j-2},
/// seeded with T_0 = 1 and driven by ACoefficientTable; 1 <= r <= 5.
double t_recurrence_closed(const OperatorParams& params, int r, double x);

/// Printed central moments mu_{n,r}(x), r <= 4 (mu_0 = 1).
double mu_closed(const OperatorParams& params, int r, double x);

/// Closed-form value for any family; `point` is k (as a double) for the
/// k-indexed families and x otherwise.
double closed_value(const ClosedFormId& id, const OperatorParams& params, double point);

/// Exact-engine counterpart of `closed_value`.
MomentValue exact_value(const ClosedFormId& id, const OperatorParams& params, double point,
                        const TruncationPolicy& policy = {});

struct SweepSpec {
  std::vector<int> n_values{1, 5, 10, 50};
  std::vector<double> beta_values{0.0, 0.25, 0.5, 0.75};
  std::vector<double> x_values{0.0, 0.5, 1.0, 4.0};
  std::vector<std::int64_t> k_values;  // empty: 0..20

  std::vector<std::int64_t> k_points() const;
};

struct DiscrepancyRow {
  int n = 1;
  double beta = 0.0;
  double point = 0.0;  // k or x, see indexed_by_k
  MomentValue exact;
  double closed = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
};

struct DiscrepancyReport {
  ClosedFormId formula;
  std::vector<DiscrepancyRow> rows;

  double max_abs_gap() const;
  double max_rel_gap() const;
};

/// Evaluates the closed form and the exact engine over every grid point. For
/// S the k = 0 points are skipped (S is undefined there). rel_gap divides by
/// max(|exact|, 1e-300).
DiscrepancyReport discrepancy_sweep(const ClosedFormId& formula, const SweepSpec& sweep,
                                    const TruncationPolicy& policy = {});

}  // namespace durr
