#include "durr/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "durr/compensated.hpp"

namespace durr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Poisson(z) weights on s in [0, k-1], relative to the mode (weight 1) and
// trimmed where they fall below 1e-40 of it.
struct PoissonWindow {
  std::int64_t first = 0;
  std::vector<long double> weights;
  double log_mode_mass = 0.0;
};

PoissonWindow poisson_window(std::int64_t k, double z) {
  PoissonWindow window;
  const std::int64_t mode = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(z)), k - 1);
  window.log_mode_mass = log_poisson_pmf(mode, z);
  constexpr long double kFloor = 1e-40L;
  std::vector<long double> below;
  long double w = 1.0L;
  for (std::int64_t s = mode - 1; s >= 0; --s) {
    w *= static_cast<long double>(s + 1) / static_cast<long double>(z);
    if (w < kFloor) break;
    below.push_back(w);
  }
  window.first = mode - static_cast<std::int64_t>(below.size());
  window.weights.assign(below.rbegin(), below.rend());
  window.weights.push_back(1.0L);
  w = 1.0L;
  for (std::int64_t s = mode + 1; s < k; ++s) {
    w *= static_cast<long double>(z) / static_cast<long double>(s);
    if (w < kFloor) break;
    window.weights.push_back(w);
  }
  return window;
}

// sum_s (k-s)^{m+1} w_s for m = 0..m_max, relative to the window scale.
std::vector<long double> relative_theta(std::int64_t k, double z, int m_max, double* log_scale) {
  const PoissonWindow window = poisson_window(k, z);
  std::vector<long double> sums(static_cast<std::size_t>(m_max) + 1, 0.0L);
  for (std::size_t i = 0; i < window.weights.size(); ++i) {
    const auto d = static_cast<long double>(k - (window.first + static_cast<std::int64_t>(i)));
    long double power = d * window.weights[i];
    for (int m = 0; m <= m_max; ++m) {
      sums[static_cast<std::size_t>(m)] += power;
      power *= d;
    }
  }
  if (log_scale != nullptr) *log_scale = window.log_mode_mass;
  return sums;
}

double stirling_weight(int m, int j) { return stirling1_unsigned(m, j).convert_to<double>(); }

void check_k(std::int64_t k) {
  if (k < 1) throw DomainError("theta: k must be >= 1 (the sum over s < k is empty at k = 0)");
}

void check_order(int r) {
  if (r < 0) throw DomainError("moment order must be >= 0");
  if (r + 1 > default_stirling_table().max_order()) throw DomainError("moment order too large for the Stirling table");
}

Rational power(const Rational& base, int exponent) {
  Rational result(1);
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

Rational factorial_rational(int r) {
  BigInt f = 1;
  for (int i = 2; i <= r; ++i) f *= i;
  return Rational(f);
}

double factorial_double(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

const Rational& exact_beta_of(const OperatorParams& params) {
  if (!params.exact_beta) throw DomainError("exact evaluation requires a rational beta");
  return *params.exact_beta;
}

}  // namespace

std::string_view to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::stirling_sum:
      return "stirling-sum";
    case MomentMethod::recurrence:
      return "recurrence";
    case MomentMethod::quadrature:
      return "quadrature";
  }
  return "unknown";
}

MomentMethod parse_moment_method(std::string_view text) {
  if (text == "stirling-sum" || text == "stirling_sum") return MomentMethod::stirling_sum;
  if (text == "recurrence") return MomentMethod::recurrence;
  if (text == "quadrature") return MomentMethod::quadrature;
  throw DomainError("unknown moment method '" + std::string(text) + "'");
}

Rational theta(std::int64_t k, const Rational& x, int m) {
  check_k(k);
  if (m < 0) throw DomainError("theta: m must be >= 0");
  Rational sum(0);
  Rational term(1);  // x^s / s!
  for (std::int64_t s = 0; s < k; ++s) {
    if (s > 0) term = term * x / s;
    BigInt coefficient = 1;
    for (int i = 0; i <= m; ++i) coefficient *= (k - s);
    sum += Rational(coefficient) * term;
  }
  return sum;
}

double theta(std::int64_t k, double x, int m) {
  check_k(k);
  if (m < 0) throw DomainError("theta: m must be >= 0");
  CompensatedSum sum;
  double term = 1.0;
  for (std::int64_t s = 0; s < k; ++s) {
    if (s > 0) term *= x / static_cast<double>(s);
    sum += std::pow(static_cast<double>(k - s), m + 1) * term;
  }
  return sum.value();
}

double scaled_theta(std::int64_t k, double x, int m) {
  check_k(k);
  if (m < 0) throw DomainError("theta: m must be >= 0");
  if (x < 0.0) throw DomainError("theta: x must be >= 0");
  double log_scale = 0.0;
  const auto sums = relative_theta(k, x, m, &log_scale);
  return static_cast<double>(sums[static_cast<std::size_t>(m)]) * std::exp(log_scale);
}

Rational s_ratio_exact(std::int64_t k, const Rational& x, int r) {
  if (r == 0) {
    check_k(k);
    return Rational(1);
  }
  return theta(k, x, r) / theta(k, x, 0);
}

double s_ratio_exact(std::int64_t k, double x, int r) {
  check_k(k);
  if (r < 0) throw DomainError("s_ratio_exact: r must be >= 0");
  if (x < 0.0) throw DomainError("s_ratio_exact: x must be >= 0");
  if (r == 0) return 1.0;
  const auto sums = relative_theta(k, x, r, nullptr);
  return static_cast<double>(sums[static_cast<std::size_t>(r)] / sums[0]);
}

Rational scaled_raw_moment_exact(const OperatorParams& params, std::int64_t k, int r) {
  check_order(r);
  const Rational& beta = exact_beta_of(params);
  const Rational n_power = power(Rational(params.n), r + 1);
  if (k == 0) return factorial_rational(r) / n_power;
  if (k < 0) throw DomainError("basis index must be >= 0");
  const Rational z = beta * k;
  Rational sum(0);
  for (int j = 1; j <= r + 1; ++j) {
    sum += Rational(stirling1_unsigned(r + 1, j)) * theta(k, z, j - 1);
  }
  return sum / (n_power * k);
}

namespace {

MomentValue raw_moment_stirling(const OperatorParams& params, std::int64_t k, int r) {
  const double n_power = std::pow(static_cast<double>(params.n), r + 1);
  MomentValue result;
  if (k == 0) {
    result.value = factorial_double(r) / n_power;
    result.exact = factorial_rational(r) / power(Rational(params.n), r + 1);
    result.abs_error_bound = 2.0 * kEps * result.value;
    return result;
  }
  const double z = static_cast<double>(k) * params.beta;
  double log_scale = 0.0;
  const auto sums = relative_theta(k, z, r, &log_scale);
  long double combined = 0.0L;
  for (int j = 1; j <= r + 1; ++j) {
    combined += static_cast<long double>(stirling_weight(r + 1, j)) * sums[static_cast<std::size_t>(j) - 1];
  }
  result.value = static_cast<double>(combined) * std::exp(log_scale) / (static_cast<double>(k) * n_power);
  result.abs_error_bound = 16.0 * kEps * static_cast<double>(r + 2) * result.value *
                           (1.0 + std::abs(log_scale));
  return result;
}

MomentValue raw_moment_recurrence(const OperatorParams& params, std::int64_t k, int r) {
  MomentValue low = raw_moment_stirling(params, k, 0);
  if (r == 0) return low;
  MomentValue high = raw_moment_stirling(params, k, 1);
  const double n = params.n;
  const double kd = static_cast<double>(k);
  for (int q = 1; q < r; ++q) {
    // n^2 I_{q+1} = n ((1-beta) k + q + 1) I_q + (q+1) beta k I_{q-1}
    const double a = ((1.0 - params.beta) * kd + q + 1) / n;
    const double b = (q + 1) * params.beta * kd / (n * n);
    MomentValue next;
    next.value = a * high.value + b * low.value;
    next.abs_error_bound = a * high.abs_error_bound + b * low.abs_error_bound + 2.0 * kEps * next.value;
    low = std::move(high);
    high = std::move(next);
  }
  high.exact.reset();
  return high;
}

MomentValue raw_moment_quadrature(const OperatorParams& params, std::int64_t k, int r) {
  const double n = params.n;
  const double kd = static_cast<double>(k);
  const double one_minus = 1.0 - params.beta;
  // Mode of L_k in u = n t solves u^2 - k(1-beta) u - k beta = 0.
  const double u_mode =
      k == 0 ? 0.0 : 0.5 * (kd * one_minus + std::sqrt(kd * kd * one_minus * one_minus + 4.0 * kd * params.beta));
  const double centre = u_mode + r;
  const double spread = std::sqrt(kd + r + 1.0);
  std::vector<double> breakpoints;
  for (double offset : {-8.0, -3.0, 0.0, 3.0, 8.0, 20.0}) {
    const double u = centre + offset * spread;
    if (u > 0.0) breakpoints.push_back(u / n);
  }
  const double t_ref = std::max(centre, 0.5) / n;
  const double log_scale = basis_log_value(params, k, t_ref) + r * std::log(t_ref);
  auto integrand = [&](double t) {
    if (t <= 0.0) return (k == 0 && r == 0) ? std::exp(-log_scale) : 0.0;
    return std::exp(basis_log_value(params, k, t) + r * std::log(t) - log_scale);
  };
  QuadratureConfig config;
  config.rel_tol = 1e-13;
  config.abs_tol = 0.0;
  config.max_panels = 2000;
  const QuadratureResult q = integrate_semi_infinite(integrand, breakpoints, config);
  const double scale = std::exp(log_scale);
  if (!q.converged && q.abs_error > 1e-10 * std::abs(q.value)) {
    throw AccuracyError("basis moment quadrature for k = " + std::to_string(k) + ", r = " + std::to_string(r) +
                            " did not converge",
                        q.abs_error * scale);
  }
  MomentValue result;
  result.value = q.value * scale;
  result.abs_error_bound = q.abs_error * scale;
  return result;
}

}  // namespace

MomentValue basis_raw_moment(const OperatorParams& params, std::int64_t k, int r, MomentMethod method) {
  params.validate();
  check_order(r);
  if (k < 0) throw DomainError("basis index must be >= 0");
  switch (method) {
    case MomentMethod::stirling_sum:
      return raw_moment_stirling(params, k, r);
    case MomentMethod::recurrence:
      return raw_moment_recurrence(params, k, r);
    case MomentMethod::quadrature:
      return raw_moment_quadrature(params, k, r);
  }
  throw DomainError("unknown moment method");
}

MomentValue basis_raw_moment_tricomi(const OperatorParams& params, std::int64_t k, int r) {
  params.validate();
  check_order(r);
  if (k < 1) throw DomainError("Tricomi route needs k >= 1");
  if (!(params.beta > 0.0)) throw DomainError("Tricomi route needs beta > 0 (U is evaluated at z = k beta)");
  const double kd = static_cast<double>(k);
  const double z = kd * params.beta;
  const double log_u = log_tricomi_u_integer_gap(r + 2.0, kd + r + 2.0, z);
  const double log_value = (kd + r + 1.0) * std::log(z) - z + log_factorial(r + 1) - log_factorial(k) -
                           (r + 1.0) * std::log(static_cast<double>(params.n)) + log_u;
  MomentValue result;
  result.value = std::exp(log_value);
  result.abs_error_bound = 8.0 * kEps * (kd + r + 2.0 + std::abs(log_value)) * result.value;
  return result;
}

MomentValue p_exact(const OperatorParams& params, std::int64_t k, int r) {
  params.validate();
  check_order(r);
  if (k < 0) throw DomainError("basis index must be >= 0");
  MomentValue result;
  if (params.is_exact()) {
    Rational value;
    if (k == 0) {
      value = factorial_rational(r) / power(Rational(params.n), r);
    } else {
      const Rational z = *params.exact_beta * k;
      const Rational theta0 = theta(k, z, 0);
      Rational sum(0);
      for (int j = 1; j <= r + 1; ++j) {
        const Rational s_ratio = j == 1 ? Rational(1) : theta(k, z, j - 1) / theta0;
        sum += Rational(stirling1_unsigned(r + 1, j)) * s_ratio;
      }
      value = sum / power(Rational(params.n), r);
    }
    result.value = to_double(value);
    result.abs_error_bound = 0.5 * kEps * std::abs(result.value);
    result.exact = std::move(value);
    return result;
  }
  const double n_power = std::pow(static_cast<double>(params.n), r);
  if (k == 0) {
    result.value = factorial_double(r) / n_power;
    result.abs_error_bound = 2.0 * kEps * result.value;
    return result;
  }
  const auto sums = relative_theta(k, static_cast<double>(k) * params.beta, r, nullptr);
  long double combined = 0.0L;
  for (int j = 1; j <= r + 1; ++j) {
    combined += static_cast<long double>(stirling_weight(r + 1, j)) * (sums[static_cast<std::size_t>(j) - 1] / sums[0]);
  }
  result.value = static_cast<double>(combined) / n_power;
  result.abs_error_bound = 8.0 * kEps * static_cast<double>(r + 2) * result.value;
  return result;
}

std::vector<MomentValue> p_recurrence(const OperatorParams& params, std::int64_t k, int r_max) {
  params.validate();
  check_order(r_max);
  if (k < 0) throw DomainError("basis index must be >= 0");
  std::vector<MomentValue> out;
  out.reserve(static_cast<std::size_t>(r_max) + 1);
  if (params.is_exact()) {
    const Rational& beta = *params.exact_beta;
    const Rational n(params.n);
    std::vector<Rational> p;
    p.emplace_back(1);
    if (r_max >= 1) p.push_back(*p_exact(params, k, 1).exact);
    for (int q = 0; q + 2 <= r_max; ++q) {
      const Rational& p0 = p[static_cast<std::size_t>(q)];
      const Rational& p1 = p[static_cast<std::size_t>(q) + 1];
      p.push_back((n * ((1 - beta) * k + q + 2) * p1 + Rational(q + 2) * beta * k * p0) / (n * n));
    }
    for (auto& value : p) {
      MomentValue m;
      m.value = to_double(value);
      m.abs_error_bound = 0.5 * kEps * std::abs(m.value);
      m.exact = std::move(value);
      out.push_back(std::move(m));
    }
    return out;
  }
  const double n = params.n;
  const double kd = static_cast<double>(k);
  out.push_back({1.0, std::nullopt, 0.0, false});
  if (r_max >= 1) out.push_back(p_exact(params, k, 1));
  for (int q = 0; q + 2 <= r_max; ++q) {
    const MomentValue& p0 = out[static_cast<std::size_t>(q)];
    const MomentValue& p1 = out[static_cast<std::size_t>(q) + 1];
    const double a = ((1.0 - params.beta) * kd + q + 2) / n;
    const double b = (q + 2) * params.beta * kd / (n * n);
    MomentValue next;
    next.value = a * p1.value + b * p0.value;
    next.abs_error_bound = a * p1.abs_error_bound + b * p0.abs_error_bound + 2.0 * kEps * next.value;
    out.push_back(std::move(next));
  }
  return out;
}

MomentTable::MomentTable(const OperatorParams& params, int r_max) : params_(params), r_max_(r_max) {
  params_.validate();
  check_order(r_max);
}

std::vector<double> MomentTable::compute_row(std::int64_t k) const {
  const auto width = static_cast<std::size_t>(r_max_) + 1;
  std::vector<double> row(width);
  const long double n = params_.n;
  if (k == 0) {
    long double value = 1.0L;
    for (int r = 0; r <= r_max_; ++r) {
      if (r > 0) value *= static_cast<long double>(r) / n;
      row[static_cast<std::size_t>(r)] = static_cast<double>(value);
    }
    return row;
  }
  // sum_s (k-s)_{r+1} w_s, the rising factorial built up factor by factor.
  const PoissonWindow window = poisson_window(k, static_cast<double>(k) * params_.beta);
  std::vector<long double> sums(width, 0.0L);
  for (std::size_t i = 0; i < window.weights.size(); ++i) {
    const auto d = static_cast<long double>(k - (window.first + static_cast<std::int64_t>(i)));
    long double rising = d * window.weights[i];
    for (int r = 0; r <= r_max_; ++r) {
      sums[static_cast<std::size_t>(r)] += rising;
      rising *= d + static_cast<long double>(r + 1);
    }
  }
  long double n_power = 1.0L;
  for (int r = 0; r <= r_max_; ++r) {
    row[static_cast<std::size_t>(r)] = static_cast<double>(sums[static_cast<std::size_t>(r)] / sums[0] / n_power);
    n_power *= n;
  }
  return row;
}

void MomentTable::extend_to(std::int64_t k) {
  if (k < cached_) return;
  const auto width = static_cast<std::size_t>(r_max_) + 1;
  rows_.reserve(static_cast<std::size_t>(k + 1) * width);
  for (std::int64_t j = cached_; j <= k; ++j) {
    const auto row = compute_row(j);
    rows_.insert(rows_.end(), row.begin(), row.end());
  }
  cached_ = k + 1;
}

double MomentTable::ratio(std::int64_t k, int r) {
  if (k < 0) throw DomainError("basis index must be >= 0");
  if (r < 0 || r > r_max_) throw DomainError("moment order outside the table");
  extend_to(k);
  return rows_[static_cast<std::size_t>(k) * (static_cast<std::size_t>(r_max_) + 1) + static_cast<std::size_t>(r)];
}

std::vector<MomentValue> MomentTable::operator_moments(int r, double x, const TruncationPolicy& policy) {
  if (r < 0 || r > r_max_) throw DomainError("moment order outside the table");
  if (x < 0.0) throw DomainError("operator moments need x >= 0");
  policy.validate();
  const auto count = static_cast<std::size_t>(r) + 1;
  std::vector<MomentValue> out(count);
  if (x == 0.0) {
    // Only k = 0 carries weight: T_j(0) = j! / n^j.
    for (int j = 0; j <= r; ++j) {
      Rational exact = factorial_rational(j) / power(Rational(params_.n), j);
      out[static_cast<std::size_t>(j)].value = to_double(exact);
      out[static_cast<std::size_t>(j)].exact = std::move(exact);
    }
    return out;
  }
  const Truncation truncation = truncation_index(params_, x, policy);
  std::vector<CompensatedSum> sums(count);
  std::vector<double> abs_sums(count, 0.0);
  CompensatedSum mass;
  std::int64_t k = 0;
  double last_term = 0.0;
  double previous_term = 0.0;
  auto add_term = [&](std::int64_t index) {
    const double weight = basis_value(params_, index, x);
    mass += weight;
    for (std::size_t j = 0; j < count; ++j) {
      const double term = ratio(index, static_cast<int>(j)) * weight;
      sums[j] += term;
      abs_sums[j] += std::abs(term);
    }
    previous_term = last_term;
    last_term = ratio(index, r) * weight;
  };
  for (; k <= truncation.k_max; ++k) add_term(k);
  // Past the mass cut the polynomial growth of P_r can still matter.
  while (k <= policy.hard_cap && last_term > 1e-17 * std::abs(sums[count - 1].value())) {
    add_term(k);
    ++k;
  }
  const std::int64_t k_end = k - 1;
  const double deficit = std::max(0.0, 1.0 - mass.value());
  const auto far_row = compute_row(2 * std::max<std::int64_t>(k_end, 1));
  double geometric_tail = 0.0;
  if (previous_term > 0.0 && last_term < previous_term) {
    const double q = last_term / previous_term;
    geometric_tail = last_term * q / (1.0 - q);
  } else if (last_term > 0.0) {
    geometric_tail = last_term;
  }
  for (std::size_t j = 0; j < count; ++j) {
    out[j].value = sums[j].value();
    const double tail = 2.0 * deficit * far_row[j] + (j + 1 == count ? geometric_tail : 0.0);
    out[j].abs_error_bound = tail + 64.0 * kEps * abs_sums[j];
    out[j].saturated = truncation.saturated;
  }
  return out;
}

MomentValue MomentTable::operator_moment(int r, double x, const TruncationPolicy& policy) {
  return operator_moments(r, x, policy).back();
}

MomentValue MomentTable::central_moment(int r, double x, const TruncationPolicy& policy) {
  const auto moments = operator_moments(r, x, policy);
  MomentValue result;
  if (moments.back().exact) {
    // x == 0: central and raw moments coincide.
    return moments.back();
  }
  CompensatedSum sum;
  double bound = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double coefficient = binomial(r, j).convert_to<double>() * std::pow(-x, r - j);
    const auto& t = moments[static_cast<std::size_t>(j)];
    sum += coefficient * t.value;
    bound += std::abs(coefficient) * (t.abs_error_bound + kEps * std::abs(t.value));
    result.saturated = result.saturated || t.saturated;
  }
  result.value = sum.value();
  result.abs_error_bound = bound;
  return result;
}

MomentValue t_series(const OperatorParams& params, int r, double x, const TruncationPolicy& policy) {
  MomentTable table(params, r);
  return table.operator_moment(r, x, policy);
}

MomentValue central_moment_series(const OperatorParams& params, int r, double x, const TruncationPolicy& policy) {
  MomentTable table(params, r);
  return table.central_moment(r, x, policy);
}

}  // namespace durr
