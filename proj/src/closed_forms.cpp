#include "durr/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "durr/compensated.hpp"

namespace durr {

namespace {

void require_order(ClosedFamily family, int r) {
  if (r < min_order(family) || r > max_order(family)) throw UnsupportedOrder(std::string(to_string(family)), r, max_order(family));
}

}  // namespace

std::string_view to_string(ClosedFamily family) {
  switch (family) {
    case ClosedFamily::jain_B:
      return "jain_B";
    case ClosedFamily::S_closed:
      return "S_closed";
    case ClosedFamily::P_closed:
      return "P_closed";
    case ClosedFamily::T_closed:
      return "T_closed";
    case ClosedFamily::mu_closed:
      return "mu_closed";
    case ClosedFamily::T_recur:
      return "T_recur";
  }
  return "unknown";
}

ClosedFamily parse_closed_family(std::string_view text) {
  if (text == "B" || text == "jain_B") return ClosedFamily::jain_B;
  if (text == "S" || text == "S_closed") return ClosedFamily::S_closed;
  if (text == "P" || text == "P_closed") return ClosedFamily::P_closed;
  if (text == "T" || text == "T_closed") return ClosedFamily::T_closed;
  if (text == "mu" || text == "mu_closed") return ClosedFamily::mu_closed;
  if (text == "Trec" || text == "T_recur") return ClosedFamily::T_recur;
  throw DomainError("unknown closed-form family '" + std::string(text) + "'");
}

int max_order(ClosedFamily family) {
  switch (family) {
    case ClosedFamily::S_closed:
    case ClosedFamily::mu_closed:
      return 4;
    default:
      return 5;
  }
}

int min_order(ClosedFamily family) { return family == ClosedFamily::T_recur ? 1 : 0; }

bool indexed_by_k(ClosedFamily family) {
  return family == ClosedFamily::S_closed || family == ClosedFamily::P_closed;
}

void ClosedFormId::validate() const { require_order(family, order); }

double ACoefficientTable::value(int r, int j, double b) {
  if (r < 0 || r > kMaxOrder || j < 0 || j > r) throw UnsupportedOrder("A_j^r", r, kMaxOrder);
  const double b2 = b * b;
  const double b3 = b2 * b;
  const double b4 = b3 * b;
  switch (r * 4 + j) {
    case 0:
      return 1 + 2 * b;
    case 4:
      return 4 + 4 * b;
    case 5:
      return 2 * b + 6 * b2;
    case 8:
      return 9 + 6 * b;
    case 9:
      return 6 * b + 30 * b2;
    case 10:
      return 12 * b2 + 24 * b3;
    case 12:
      return 16 + 8 * b;
    case 13:
      return 12 * b + 84 * b2;
    case 14:
      return 60 * b2 + 96 * b3;
    case 15:
      return -12 * b2 + 48 * b3 + 120 * b4;
  }
  throw UnsupportedOrder("A_j^r", r, kMaxOrder);
}

double jain_moment_closed(const OperatorParams& params, int r, double x) {
  params.validate();
  require_order(ClosedFamily::jain_B, r);
  const double n = params.n;
  const double b = params.beta;
  const double o = 1.0 - b;
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return x / o;
    case 2:
      return x * x / (o * o) + x / (n * std::pow(o, 3));
    case 3:
      return std::pow(x, 3) / std::pow(o, 3) + 3 * x * x / (n * std::pow(o, 4)) +
             (1 + 2 * b) * x / (n * n * std::pow(o, 5));
    case 4:
      return std::pow(x, 4) / std::pow(o, 4) + 6 * std::pow(x, 3) / (n * std::pow(o, 5)) +
             (7 + 8 * b) * x * x / (n * n * std::pow(o, 6)) +
             (6 * b * b + 8 * b + 1) * x / (std::pow(n, 3) * std::pow(o, 7));
    default:
      return std::pow(x, 5) / std::pow(o, 5) + 10 * std::pow(x, 4) / (n * std::pow(o, 6)) +
             5 * (4 * b + 5) * std::pow(x, 3) / (n * n * std::pow(o, 7)) +
             15 * (2 * b * b + 4 * b + 1) * x * x / (std::pow(n, 3) * std::pow(o, 8)) +
             (24 * std::pow(b, 3) + 58 * b * b + 22 * b + 1) * x / (std::pow(n, 4) * std::pow(o, 9));
  }
}

MomentValue jain_moment_series(const OperatorParams& params, int r, double x, const TruncationPolicy& policy) {
  params.validate();
  if (r < 0) throw DomainError("moment order must be >= 0");
  if (x < 0.0) throw DomainError("jain_moment_series: x must be >= 0");
  MomentValue result;
  if (x == 0.0) {
    result.value = r == 0 ? 1.0 : 0.0;
    result.exact = Rational(r == 0 ? 1 : 0);
    return result;
  }
  const Truncation truncation = truncation_index(params, x, policy);
  const double n = params.n;
  CompensatedSum sum;
  CompensatedSum mass;
  double last = 0.0;
  double previous = 0.0;
  std::int64_t k = 0;
  auto add = [&](std::int64_t index) {
    const double weight = basis_value(params, index, x);
    const double term = weight * std::pow(static_cast<double>(index) / n, r);
    sum += term;
    mass += weight;
    previous = last;
    last = term;
  };
  for (; k <= truncation.k_max; ++k) add(k);
  while (k <= policy.hard_cap && last > 1e-17 * std::abs(sum.value())) add(k++);
  const double deficit = std::max(0.0, 1.0 - mass.value());
  double geometric_tail = last;
  if (previous > 0.0 && last < previous) geometric_tail = last * (last / previous) / (1.0 - last / previous);
  const double far = std::pow(2.0 * static_cast<double>(k) / n, r);
  result.value = sum.value();
  result.abs_error_bound = 2.0 * deficit * far + geometric_tail +
                           64.0 * std::numeric_limits<double>::epsilon() * std::abs(result.value);
  result.saturated = truncation.saturated;
  return result;
}

double s_closed(std::int64_t k, double b, int r) {
  require_order(ClosedFamily::S_closed, r);
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("beta must lie in [0, 1)");
  const double kd = static_cast<double>(k);
  const double o = 1.0 - b;
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return o * kd + b / o;
    case 2:
      return o * o * kd * kd + 3 * b * kd - b / o;
    case 3:
      return std::pow(o, 3) * std::pow(kd, 3) + 6 * b * o * kd * kd + b * (7 * b - 4) * kd / o + b / o;
    default:
      return std::pow(o, 4) * std::pow(kd, 4) + 10 * b * o * o * std::pow(kd, 3) + 5 * b * (5 * b - 2) * kd * kd +
             5 * b * (1 - 3 * b) * kd / o - b / o;
  }
}

double p_closed(const OperatorParams& params, std::int64_t k, int r) {
  params.validate();
  require_order(ClosedFamily::P_closed, r);
  const double n = params.n;
  const double b = params.beta;
  const double o = 1.0 - b;
  const double kd = static_cast<double>(k);
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return (o * kd + 1 / o) / n;
    case 2:
      return (o * o * kd * kd + 3 * kd + 2 / o) / (n * n);
    case 3:
      return (std::pow(o, 3) * std::pow(kd, 3) + 6 * o * kd * kd + (11 - 8 * b) * kd / o + 6 / o) / std::pow(n, 3);
    case 4:
      return (std::pow(o, 4) * std::pow(kd, 4) + 10 * o * o * std::pow(kd, 3) + 5 * (7 - 4 * b) * kd * kd +
              10 * (5 - 3 * b) * kd / o + 24 / o) /
             std::pow(n, 4);
    default:
      return (std::pow(o, 5) * std::pow(kd, 5) + 15 * std::pow(o, 3) * std::pow(kd, 4) +
              5 * o * (17 - 8 * b) * std::pow(kd, 3) + 15 * (15 - 20 * b + 6 * b * b) * kd * kd / o +
              (274 - 144 * b) * kd / o + 120 / o) /
             std::pow(n, 5);
  }
}

double t_closed(const OperatorParams& params, int r, double x) {
  params.validate();
  require_order(ClosedFamily::T_closed, r);
  const double n = params.n;
  const double b = params.beta;
  const double o = 1.0 - b;
  const double no = n * o;
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return x + 1 / no;
    case 2:
      return x * x + 4 * x / no + 2 / (n * n * o);
    case 3:
      return std::pow(x, 3) + 9 * x * x / no + 6 * (3 - b) * x / (no * no) + 6 / (std::pow(n, 3) * o);
    case 4:
      return std::pow(x, 4) + 16 * std::pow(x, 3) / no + 12 * (6 - b) * x * x / (no * no) +
             12 * (3 * b * b - 6 * b + 8) * x / std::pow(no, 3) + 24 / (std::pow(n, 4) * o);
    default:
      return std::pow(x, 5) + 25 * std::pow(x, 4) / no + 20 * (10 - b) * std::pow(x, 3) / (no * no) +
             120 * (b * b - 2 * b + 5) * x * x / std::pow(no, 3) +
             120 * (5 - 6 * b + 6 * b * b - std::pow(b, 3)) * x / std::pow(no, 4) + 120 / (std::pow(n, 5) * o);
  }
}

double t_recurrence_closed(const OperatorParams& params, int r, double x) {
  params.validate();
  require_order(ClosedFamily::T_recur, r);
  const double no = params.n * (1.0 - params.beta);
  std::vector<double> t{1.0};
  for (int q = 1; q <= r; ++q) {
    double value = (x + (2.0 * q - 1.0) / no) * t[static_cast<std::size_t>(q) - 1];
    for (int j = 0; j <= q - 2; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      value -= sign * ACoefficientTable::value(q - 2, j, params.beta) / std::pow(no, j + 2) *
               t[static_cast<std::size_t>(q - j - 2)];
    }
    t.push_back(value);
  }
  return t.back();
}

double mu_closed(const OperatorParams& params, int r, double x) {
  params.validate();
  require_order(ClosedFamily::mu_closed, r);
  const double n = params.n;
  const double o = 1.0 - params.beta;
  const double b = params.beta;
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return 1 / (n * o);
    case 2:
      return 2 * x / (n * o) + 2 / (n * n * o);
    case 3:
      return 12 * x / (n * n * o * o) + 6 / (std::pow(n, 3) * o);
    default:
      // Transcribed as printed; the binomial expansion of the printed T list
      // puts (1-b)^3 under the x / n^3 term.
      return 12 * x * x / (n * n * o * o) + 12 * (6 - 2 * b + b * b) * x / (std::pow(n, 3) * o * o) +
             24 / (std::pow(n, 4) * o);
  }
}

double closed_value(const ClosedFormId& id, const OperatorParams& params, double point) {
  id.validate();
  switch (id.family) {
    case ClosedFamily::jain_B:
      return jain_moment_closed(params, id.order, point);
    case ClosedFamily::S_closed:
      return s_closed(static_cast<std::int64_t>(point), params.beta, id.order);
    case ClosedFamily::P_closed:
      return p_closed(params, static_cast<std::int64_t>(point), id.order);
    case ClosedFamily::T_closed:
      return t_closed(params, id.order, point);
    case ClosedFamily::mu_closed:
      return mu_closed(params, id.order, point);
    case ClosedFamily::T_recur:
      return t_recurrence_closed(params, id.order, point);
  }
  throw DomainError("unknown family");
}

MomentValue exact_value(const ClosedFormId& id, const OperatorParams& params, double point,
                        const TruncationPolicy& policy) {
  id.validate();
  switch (id.family) {
    case ClosedFamily::jain_B:
      return jain_moment_series(params, id.order, point, policy);
    case ClosedFamily::S_closed: {
      const auto k = static_cast<std::int64_t>(point);
      MomentValue value;
      if (params.is_exact()) {
        Rational exact = s_ratio_exact(k, *params.exact_beta * k, id.order);
        value.value = to_double(exact);
        value.exact = std::move(exact);
      } else {
        value.value = s_ratio_exact(k, static_cast<double>(k) * params.beta, id.order);
        value.abs_error_bound = 8.0 * std::numeric_limits<double>::epsilon() * (id.order + 2) * value.value;
      }
      return value;
    }
    case ClosedFamily::P_closed:
      return p_exact(params, static_cast<std::int64_t>(point), id.order);
    case ClosedFamily::T_closed:
    case ClosedFamily::T_recur:
      return t_series(params, id.order, point, policy);
    case ClosedFamily::mu_closed:
      return central_moment_series(params, id.order, point, policy);
  }
  throw DomainError("unknown family");
}

std::vector<std::int64_t> SweepSpec::k_points() const {
  if (!k_values.empty()) return k_values;
  std::vector<std::int64_t> out;
  for (std::int64_t k = 0; k <= 20; ++k) out.push_back(k);
  return out;
}

double DiscrepancyReport::max_abs_gap() const {
  double gap = 0.0;
  for (const auto& row : rows) gap = std::max(gap, row.abs_gap);
  return gap;
}

double DiscrepancyReport::max_rel_gap() const {
  double gap = 0.0;
  for (const auto& row : rows) gap = std::max(gap, row.rel_gap);
  return gap;
}

DiscrepancyReport discrepancy_sweep(const ClosedFormId& formula, const SweepSpec& sweep,
                                    const TruncationPolicy& policy) {
  formula.validate();
  DiscrepancyReport report;
  report.formula = formula;
  const bool by_k = indexed_by_k(formula.family);
  std::vector<double> points;
  if (by_k) {
    for (auto k : sweep.k_points()) {
      if (formula.family == ClosedFamily::S_closed && k == 0) continue;
      points.push_back(static_cast<double>(k));
    }
  } else {
    points = sweep.x_values;
  }
  for (int n : sweep.n_values) {
    for (double beta : sweep.beta_values) {
      const OperatorParams params(n, beta);
      for (double point : points) {
        DiscrepancyRow row;
        row.n = n;
        row.beta = beta;
        row.point = point;
        row.exact = exact_value(formula, params, point, policy);
        row.closed = closed_value(formula, params, point);
        row.abs_gap = std::abs(row.exact.value - row.closed);
        row.rel_gap = row.abs_gap / std::max(std::abs(row.exact.value), 1e-300);
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

}  // namespace durr
