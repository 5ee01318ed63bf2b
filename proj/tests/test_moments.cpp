#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "durr/moments.hpp"
#include "oracle.hpp"

using namespace durr;

namespace {

const Rational kBetas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)};

}  // namespace

TEST_CASE("theta and S ratios") {
  CHECK(theta(1, Rational(7, 3), 4) == 1);
  CHECK(theta(1, 0.3, 2) == 1.0);
  CHECK(theta(2, Rational(1), 0) == 3);
  CHECK(theta(2, Rational(1), 1) == 5);
  CHECK(theta(2, 1.0, 1) == 5.0);
  CHECK_THROWS_AS(theta(0, Rational(1), 0), DomainError);

  CHECK(s_ratio_exact(2, Rational(1), 1) == Rational(5, 3));
  CHECK(s_ratio_exact(5, Rational(3, 2), 0) == 1);
  for (int r = 0; r <= 6; ++r) CHECK(s_ratio_exact(1, Rational(9, 4), r) == 1);

  // e^{-x} theta stays finite where theta alone overflows.
  const double big = scaled_theta(400, 300.0, 3);
  CHECK(std::isfinite(big));
  CHECK(big > 0.0);
  CHECK(scaled_theta(6, 2.5, 2) == doctest::Approx(std::exp(-2.5) * theta(6, 2.5, 2)).epsilon(1e-14));
}

TEST_CASE("raw moments: worked values") {
  const OperatorParams p2(2, 0.5);
  CHECK(basis_raw_moment(p2, 0, 2, MomentMethod::stirling_sum).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(basis_raw_moment(p2, 1, 0, MomentMethod::stirling_sum).value ==
        doctest::Approx(std::exp(-0.5) / 2).epsilon(1e-14));
  CHECK(basis_raw_moment(OperatorParams(1, 0.5), 1, 1, MomentMethod::stirling_sum).value ==
        doctest::Approx(2 * std::exp(-0.5)).epsilon(1e-14));
  for (MomentMethod m : {MomentMethod::recurrence, MomentMethod::quadrature}) {
    CHECK(basis_raw_moment(OperatorParams(1, 0.5), 1, 1, m).value == doctest::Approx(2 * std::exp(-0.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(basis_raw_moment_tricomi(OperatorParams(1, 0.0), 3, 1), DomainError);
  CHECK_THROWS_AS(basis_raw_moment_tricomi(OperatorParams(1, 0.5), 0, 1), DomainError);
}

TEST_CASE("raw moments: routes agree") {
  for (int n : {1, 5}) {
    for (const Rational& beta_q : kBetas) {
      const OperatorParams p(n, to_double(beta_q));
      for (std::int64_t k = 0; k <= 25; ++k) {
        for (int r = 0; r <= 6; ++r) {
          const long double ref = oracle::to_ld(oracle::scaled_moment(n, beta_q, k, r)) * std::exp(-k * p.beta * 1.0L);
          const MomentValue s = basis_raw_moment(p, k, r, MomentMethod::stirling_sum);
          const MomentValue q = basis_raw_moment(p, k, r, MomentMethod::quadrature);
          const MomentValue c = basis_raw_moment(p, k, r, MomentMethod::recurrence);
          CHECK(s.value > 0.0);
          CHECK(oracle::relative_gap(s.value, ref) <= 1e-12L);
          CHECK(oracle::relative_gap(q.value, s.value) <= 1e-10L);
          CHECK(oracle::relative_gap(c.value, s.value) <= 1e-10L);
          if (k >= 1 && p.beta > 0.0) {
            CHECK(oracle::relative_gap(basis_raw_moment_tricomi(p, k, r).value, s.value) <= 1e-10L);
          }
        }
      }
    }
  }
}

TEST_CASE("exact moments: binomial form, Stirling form and recurrence coincide") {
  for (int n : {1, 5}) {
    for (const Rational& beta : kBetas) {
      const OperatorParams p(n, beta);
      for (std::int64_t k = 0; k <= 25; ++k) {
        const auto chain = p_recurrence(p, k, 6);
        for (int r = 0; r <= 6; ++r) {
          CHECK(scaled_raw_moment_exact(p, k, r) == oracle::scaled_moment(n, beta, k, r));
          const MomentValue direct = p_exact(p, k, r);
          REQUIRE(direct.exact);
          REQUIRE(chain[static_cast<std::size_t>(r)].exact);
          CHECK(*direct.exact == oracle::p_ratio(n, beta, k, r));
          CHECK(*chain[static_cast<std::size_t>(r)].exact == *direct.exact);
          CHECK(direct.value == to_double(*direct.exact));
        }
        // Three-term residual, exactly zero.
        for (int r = 0; r + 2 <= 6; ++r) {
          const Rational nn = n;
          const Rational residual = nn * nn * *p_exact(p, k, r + 2).exact -
                                    nn * ((1 - beta) * k + r + 2) * *p_exact(p, k, r + 1).exact -
                                    Rational(r + 2) * beta * k * *p_exact(p, k, r).exact;
          CHECK(residual == 0);
        }
      }
    }
  }
}

TEST_CASE("moment ratios: worked values") {
  CHECK(p_exact(OperatorParams(2, 0.37), 1, 2).value == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(*p_exact(OperatorParams(2, Rational(3, 7)), 1, 2).exact == Rational(3, 2));
  CHECK(*p_exact(OperatorParams(1, Rational(0)), 3, 2).exact == 20);
  CHECK(*p_exact(OperatorParams(1, Rational(1, 2)), 2, 1).exact == Rational(8, 3));
  CHECK(*p_exact(OperatorParams(3, Rational(1, 2)), 0, 3).exact == Rational(6, 27));
  CHECK_FALSE(p_exact(OperatorParams(1, 0.5), 2, 1).exact);
  CHECK(p_exact(OperatorParams(1, 0.5), 2, 1).value == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

  for (int r = 0; r <= 6; ++r) {
    for (int n : {1, 3}) {
      const Rational expected(oracle::factorial(r + 1), boost::multiprecision::pow(BigInt(n), r));
      CHECK(*p_recurrence(OperatorParams(n, Rational(2, 5)), 1, 6)[static_cast<std::size_t>(r)].exact == expected);
    }
  }
  const auto chain = p_recurrence(OperatorParams(1, Rational(1, 2)), 2, 2);
  CHECK(*chain[2].exact == *p_exact(OperatorParams(1, Rational(1, 2)), 2, 2).exact);
}

TEST_CASE("beta = 0: factorial family") {
  for (int n : {1, 2, 7}) {
    const OperatorParams p(n, Rational(0));
    for (std::int64_t k = 0; k <= 10; ++k) {
      const auto chain = p_recurrence(p, k, 6);
      for (int r = 0; r <= 6; ++r) {
        const Rational expected = Rational(oracle::factorial(static_cast<int>(k) + r),
                                           oracle::factorial(static_cast<int>(k)) *
                                               boost::multiprecision::pow(BigInt(n), r));
        CHECK(*p_exact(p, k, r).exact == expected);
        CHECK(*chain[static_cast<std::size_t>(r)].exact == expected);
      }
    }
  }
}

TEST_CASE("moment ratios increase with r at n = 1") {
  // At k = 0 the ratios are r!, so P_0 = P_1 and the increase starts at r = 1.
  CHECK(p_exact(OperatorParams(1, 0.4), 0, 0).value == p_exact(OperatorParams(1, 0.4), 0, 1).value);
  for (int r = 2; r <= 8; ++r) {
    CHECK(p_exact(OperatorParams(1, 0.4), 0, r).value > p_exact(OperatorParams(1, 0.4), 0, r - 1).value);
  }
  for (int i = 0; i < 200; ++i) {
    const double beta = oracle::uniform(0.0, 0.95);
    const std::int64_t k = oracle::uniform_int(1, 60);
    double previous = 0.0;
    for (int r = 0; r <= 8; ++r) {
      const double v = p_exact(OperatorParams(1, beta), k, r).value;
      CHECK(v > previous);
      previous = v;
    }
  }
}

TEST_CASE("moment table matches p_exact") {
  const OperatorParams p(7, 0.35);
  MomentTable table(p, 5);
  for (std::int64_t k : {0, 1, 2, 13, 80, 400, 3}) {
    for (int r = 0; r <= 5; ++r) {
      CHECK(oracle::relative_gap(table.ratio(k, r), p_exact(p, k, r).value) <= 1e-13L);
    }
  }
}

TEST_CASE("operator moments") {
  for (int n : {1, 5, 50}) {
    for (double beta : {0.0, 0.25, 0.5, 0.75}) {
      for (double x : {0.0, 0.5, 1.0, 4.0}) {
        const MomentValue t0 = t_series(OperatorParams(n, beta), 0, x);
        CHECK(std::fabs(t0.value - 1.0) <= 1e-12);
        CHECK_FALSE(t0.saturated);
      }
    }
  }
  CHECK(t_series(OperatorParams(10, 0.5), 3, 0.0).value == 6.0 / 1000.0);
  CHECK(t_series(OperatorParams(10, 0.0), 1, 1.0).value == doctest::Approx(1.1).epsilon(1e-10));

  // Against the oracle series sum_k P_r(k) L_k(x).
  const OperatorParams p(3, Rational(1, 3));
  for (double x : {0.2, 1.5}) {
    for (int r = 1; r <= 4; ++r) {
      long double ref = 0.0L;
      for (std::int64_t k = 0; k <= 200; ++k) {
        ref += oracle::to_ld(oracle::p_ratio(3, Rational(1, 3), k, r)) * oracle::basis(3, 1.0L / 3, k, x);
      }
      const MomentValue t = t_series(p, r, x);
      CHECK(oracle::relative_gap(t.value, ref) <= 1e-13L);
      CHECK(std::fabs(t.value - ref) <= t.abs_error_bound + 1e-15L * std::fabs(ref));
    }
  }
}

TEST_CASE("central moments") {
  CHECK(central_moment_series(OperatorParams(9, 0.2), 0, 2.0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(central_moment_series(OperatorParams(100, 0.0), 2, 1.0).value == doctest::Approx(0.0202).epsilon(1e-9));
  CHECK(central_moment_series(OperatorParams(100, 0.0), 1, 1.0).value == doctest::Approx(0.01).epsilon(1e-12));

  for (int r = 1; r <= 4; ++r) {
    std::vector<double> scaled;
    for (int n : {10, 20, 40, 80, 160}) {
      scaled.push_back(std::pow(n, (r + 1) / 2) * std::fabs(central_moment_series(OperatorParams(n, 0.5), r, 1.0).value));
    }
    const double lo = *std::min_element(scaled.begin(), scaled.end());
    const double hi = *std::max_element(scaled.begin(), scaled.end());
    CHECK(hi <= 2.5 * lo);
  }
}

TEST_CASE("method names") {
  CHECK(parse_moment_method("stirling-sum") == MomentMethod::stirling_sum);
  CHECK(parse_moment_method("stirling_sum") == MomentMethod::stirling_sum);
  CHECK(parse_moment_method("recurrence") == MomentMethod::recurrence);
  CHECK(to_string(MomentMethod::quadrature) == "quadrature");
  CHECK_THROWS_AS(parse_moment_method("simpson"), DomainError);
}
