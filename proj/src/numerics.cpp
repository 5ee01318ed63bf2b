#include "durr/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace durr {

namespace mp = boost::multiprecision;

double to_double(const Rational& q) {
  BigInt num = mp::numerator(q);
  const BigInt den = mp::denominator(q);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;

  // Produce an integer quotient with 62-63 significant bits plus a sticky
  // bit, then let the hardware round the 64-bit integer once.
  const long e = static_cast<long>(mp::msb(num)) - static_cast<long>(mp::msb(den));
  constexpr long kBits = 62;
  BigInt quotient;
  BigInt remainder;
  if (kBits - e >= 0) {
    mp::divide_qr(BigInt(num << static_cast<unsigned>(kBits - e)), den, quotient, remainder);
  } else {
    mp::divide_qr(num, BigInt(den << static_cast<unsigned>(e - kBits)), quotient, remainder);
  }
  auto bits = quotient.convert_to<std::uint64_t>();
  if (remainder != 0) bits |= 1u;
  const double magnitude = std::ldexp(static_cast<double>(bits), static_cast<int>(e - kBits));
  return negative ? -magnitude : magnitude;
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw DomainError("malformed rational '" + text + "'");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw DomainError("malformed rational '" + text + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw DomainError("malformed rational '" + text + "'");
    }
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const BigInt p = parse_int(text.substr(0, slash));
  const BigInt q = parse_int(text.substr(slash + 1));
  if (q == 0) throw DomainError("rational '" + text + "' has zero denominator");
  return Rational(p, q);
}

std::string to_string(const Rational& q) {
  const BigInt& den = mp::denominator(q);
  if (den == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + den.str();
}

StirlingTable::StirlingTable(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw DomainError("StirlingTable: max_order must be >= 1");
  rows_.resize(static_cast<std::size_t>(max_order) + 1);
  rows_[0] = {BigInt(1)};
  for (int m = 0; m < max_order; ++m) {
    auto& next = rows_[static_cast<std::size_t>(m) + 1];
    const auto& row = rows_[static_cast<std::size_t>(m)];
    next.assign(static_cast<std::size_t>(m) + 2, BigInt(0));
    for (int j = 1; j <= m + 1; ++j) {
      // c(m+1, j) = c(m, j-1) + m c(m, j)
      BigInt value = row[static_cast<std::size_t>(j) - 1];
      if (j <= m) value += m * row[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(j)] = std::move(value);
    }
  }
}

const BigInt& StirlingTable::operator()(int m, int j) const {
  if (m < 0 || m > max_order_) {
    throw DomainError("stirling1_unsigned: order " + std::to_string(m) + " outside table of order " +
                      std::to_string(max_order_));
  }
  if (j < 0 || j > m) {
    throw DomainError("stirling1_unsigned: index " + std::to_string(j) + " outside [0, " +
                      std::to_string(m) + "]");
  }
  return rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
}

const StirlingTable& default_stirling_table() {
  static const StirlingTable table(64);
  return table;
}

const BigInt& stirling1_unsigned(int m, int j) {
  if (m < 1) throw DomainError("stirling1_unsigned: order must be >= 1");
  return default_stirling_table()(m, j);
}

BigInt binomial(std::int64_t a, std::int64_t b) {
  if (a < 0) throw DomainError("binomial: negative upper index");
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    result *= a - b + i;
    result /= i;
  }
  return result;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

namespace {

// stirlerr(n) = ln(n!) - ln(sqrt(2 pi n) (n/e)^n) for n = 1..15.
constexpr std::array<double, 16> kStirlingErrorTable = {
    0.0,
    0.08106146679532725822,
    0.041340695955409294094,
    0.027677925684998339149,
    0.020790672103765093112,
    0.016644691189821192163,
    0.013876128823070747999,
    0.011896709945891770095,
    0.010411265261972096497,
    0.0092554621827127329177,
    0.0083305634333628712565,
    0.007573675487951840795,
    0.0069428401072095298657,
    0.0064089941880042070684,
    0.0059513701127588477356,
    0.005554733551962801371,
};

double stirling_error(std::int64_t k) {
  if (k <= 15) return kStirlingErrorTable[static_cast<std::size_t>(k)];
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double n = static_cast<double>(k);
  const double nn = n * n;
  if (k > 500) return (s0 - s1 / nn) / n;
  if (k > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (k > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// bd0(x, m) = x ln(x/m) + m - x, evaluated without cancellation near x = m.
double deviance_term(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

}  // namespace

double log_factorial(std::int64_t k) {
  if (k < 0) throw DomainError("log_factorial: negative argument");
  if (k <= 1) return 0.0;
  return log_gamma(static_cast<double>(k) + 1.0);
}

double log_poisson_pmf(std::int64_t k, double mean) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (mean < 0.0) throw DomainError("log_poisson_pmf: negative mean");
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (k == 0) return -mean;
  const double x = static_cast<double>(k);
  constexpr double kLogTwoPi = 1.8378770664093454836;
  return -stirling_error(k) - deviance_term(x, mean) - 0.5 * (kLogTwoPi + std::log(x));
}

namespace {

std::int64_t checked_gap(double a, double b, double z) {
  if (!(a > 0.0)) throw DomainError("tricomi_u_integer_gap: a must be positive");
  if (!(z > 0.0)) throw DomainError("tricomi_u_integer_gap: z must be positive");
  const double gap = b - a - 1.0;
  const double rounded = std::round(gap);
  if (std::abs(gap - rounded) > 1e-12 * std::max(1.0, std::abs(b)) || rounded < 0.0) {
    throw UnsupportedParameters("tricomi_u_integer_gap: b - a - 1 must be a nonnegative integer");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

double log_tricomi_u_integer_gap(double a, double b, double z) {
  const std::int64_t gap = checked_gap(a, b, z);
  // log of term i: ln C(g,i) + ln Gamma(a+i) - ln Gamma(a) - (a+i) ln z,
  // advanced by the exact term ratio (g-i)(a+i) / ((i+1) z).
  std::vector<double> log_terms;
  log_terms.reserve(static_cast<std::size_t>(gap) + 1);
  double current = -a * std::log(z);
  log_terms.push_back(current);
  for (std::int64_t i = 0; i < gap; ++i) {
    const double ratio = static_cast<double>(gap - i) * (a + static_cast<double>(i)) /
                         (static_cast<double>(i + 1) * z);
    current += std::log(ratio);
    log_terms.push_back(current);
  }
  const double peak = *std::max_element(log_terms.begin(), log_terms.end());
  double sum = 0.0;
  for (double t : log_terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

double tricomi_u_integer_gap(double a, double b, double z) {
  return std::exp(log_tricomi_u_integer_gap(a, b, z));
}

}  // namespace durr
