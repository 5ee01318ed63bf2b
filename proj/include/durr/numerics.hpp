#pragma once

// Special functions and exact arithmetic shared by the moment routes.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "durr/error.hpp"

namespace durr {

using BigInt = boost::multiprecision::cpp_int;
/// Exact rational, always held in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Correctly rounded (round-to-nearest-even) conversion to binary64.
double to_double(const Rational& q);

/// Parses "p/q", "p" or "-p/q". Throws DomainError on malformed text or q == 0.
Rational parse_rational(const std::string& text);

/// Renders "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Triangular table of unsigned Stirling numbers of the first kind,
/// c(m, j) = number of permutations of m elements with j cycles, so that
/// y (y+1) ... (y+m-1) = sum_j c(m, j) y^j. Immutable after construction.
class StirlingTable {
 public:
  explicit StirlingTable(int max_order);

  int max_order() const noexcept { return max_order_; }

  /// c(m, j) for 0 <= j <= m <= max_order(). Throws DomainError otherwise.
  const BigInt& operator()(int m, int j) const;

 private:
  int max_order_;
  std::vector<std::vector<BigInt>> rows_;
};

/// c(m, j) from a process-wide table of order 64.
const BigInt& stirling1_unsigned(int m, int j);

/// The shared order-64 table used by stirling1_unsigned.
const StirlingTable& default_stirling_table();

/// Rising factorial y (y+1) ... (y+m-1); 1 when m == 0.
template <typename Scalar>
Scalar rising_factorial(const Scalar& y, int m) {
  if (m < 0) throw DomainError("rising_factorial: negative order");
  Scalar result(1);
  for (int i = 0; i < m; ++i) result *= y + Scalar(i);
  return result;
}

/// Binomial coefficient; 0 when b < 0 or b > a.
BigInt binomial(std::int64_t a, std::int64_t b);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln(k!) for k >= 0.
double log_factorial(std::int64_t k);

/// Tricomi U(a, b, z) for the family where b - a - 1 is a nonnegative
/// integer g. Then (1+t)^g expands finitely under the integral definition:
///   U(a, b, z) = sum_{i=0}^{g} C(g, i) Gamma(a+i) / (Gamma(a) z^{a+i}).
/// Throws UnsupportedParameters for a non-integer or negative gap and
/// DomainError for a <= 0 or z <= 0.
double tricomi_u_integer_gap(double a, double b, double z);

/// ln U(a, b, z) for the same family; does not overflow for large gaps.
double log_tricomi_u_integer_gap(double a, double b, double z);

/// ln of the Poisson mass mean^k e^{-mean} / k!, computed with the
/// saddle-point split ln p = -stirlerr(k) - bd0(k, mean) - ln(2 pi k)/2
/// so that large k and mean keep full relative accuracy.
double log_poisson_pmf(std::int64_t k, double mean);

}  // namespace durr
