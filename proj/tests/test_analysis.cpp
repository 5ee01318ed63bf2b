#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "durr/analysis.hpp"
#include "durr/moments.hpp"
#include "oracle.hpp"

using namespace durr;

TEST_CASE("grids") {
  const Grid g = Grid::uniform(0.0, 1.0, 0.3);
  REQUIRE(g.points.size() == 5);
  CHECK(g.points.front() == 0.0);
  CHECK(g.points.back() == 1.0);
  for (std::size_t i = 1; i < g.points.size(); ++i) CHECK(g.points[i] > g.points[i - 1]);

  const Grid fine = Grid::uniform(0.0, 4.0, 0.05);
  CHECK(fine.points.size() == 81);
  for (double p : fine.points) CHECK((p >= 0.0 && p <= 4.0));

  CHECK(Grid::with_points(1.0, 2.0, 11).points.size() == 11);
  CHECK_THROWS_AS(Grid::uniform(-1.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(Grid::uniform(1.0, 0.5, 0.1), DomainError);
  CHECK_THROWS_AS(Grid::uniform(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("moduli: worked values") {
  const Grid grid = Grid::uniform(0.0, 2.0, 1e-3);
  const FunctionSpec identity = FunctionSpec::monomial(1);
  for (double delta : {0.01, 0.1, 0.37}) {
    CHECK(std::fabs(modulus(identity, 1, delta, grid) - delta) <= grid.h);
    CHECK(modulus(identity, 2, delta, grid) <= 1e-12);
  }
  CHECK(std::fabs(modulus(FunctionSpec::abs_kink(1.0), 1, 0.1, grid) - 0.1) <= grid.h);
  // Second differences of |t - 1| peak at 2 * h straddling the kink.
  CHECK(std::fabs(modulus(FunctionSpec::abs_kink(1.0), 2, 0.1, grid) - 0.2) <= 2 * grid.h);
  CHECK_THROWS_AS(modulus(identity, 1, 1e-4, grid), DomainError);
  CHECK_THROWS_AS(modulus(identity, 0, 0.1, grid), DomainError);
}

TEST_CASE("moduli: monotone in delta and subadditive up to one grid step") {
  const Grid grid = Grid::uniform(0.0, 5.0, 1e-3);
  for (const FunctionSpec& f : {FunctionSpec::exp_decay(), FunctionSpec::sin_bounded(), FunctionSpec::abs_kink(1.0),
                                FunctionSpec::step_smooth(2.0)}) {
    const ModulusProfile profile = modulus_profile(f, 1, 2.0, grid);
    const ModulusProfile second = modulus_profile(f, 2, 2.0, grid);
    double previous = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double delta = oracle::uniform(1e-3, 1.0);
      CAPTURE(f.name());
      CAPTURE(delta);
      CHECK(profile.at(2 * delta) <= 2 * profile.at(delta) + profile.at(grid.h) + 1e-12);
      CHECK(profile.at(delta) >= 0.0);
      CHECK(second.at(delta) >= 0.0);
      CHECK(profile.at(delta) == modulus(f, 1, delta, grid));
    }
    for (int j = 1; j <= 2000; ++j) {
      const double current = profile.at(j * 1e-3);
      CHECK(current >= previous);
      previous = current;
    }
  }
}

TEST_CASE("delta_n") {
  CHECK(delta_n(OperatorParams(10, 0.0), 1.0) == doctest::Approx(0.23).epsilon(1e-14));
  CHECK(delta_n(OperatorParams(10, 0.5), 0.0) == doctest::Approx(0.08).epsilon(1e-14));
  for (double beta : {0.0, 0.3, 0.8}) {
    for (double x : {0.0, 0.5, 3.0}) {
      double previous = std::numeric_limits<double>::infinity();
      for (int n = 1; n <= 400; ++n) {
        const double d = delta_n(OperatorParams(n, beta), x);
        CHECK(d < previous);
        previous = d;
      }
    }
  }
}

TEST_CASE("Korovkin check") {
  const KorovkinReport half = korovkin_check(0.5, Grid::with_points(0.0, 2.0, 21), {25, 50, 100, 200}, 0.1);
  REQUIRE(half.rows.size() == 4);
  for (const KorovkinRow& row : half.rows) CHECK(row.distance[0] <= 1e-10);
  CHECK(half.rows.back().distance[1] == doctest::Approx(0.01).epsilon(0.2));
  CHECK(half.monotone(1));
  CHECK(half.monotone(2));
  CHECK(half.passed());

  const KorovkinReport zero = korovkin_check(0.0, Grid::with_points(0.0, 1.0, 21), {25, 50, 100}, 0.05);
  CHECK(zero.rows.back().distance[2] == doctest::Approx(0.0402).epsilon(0.2));
  CHECK(zero.passed());

  // Doubling n halves the e1 and e2 distances: both are O(1/n).
  for (std::size_t i = 1; i < half.rows.size(); ++i) {
    for (int e : {1, 2}) {
      const double ratio = half.rows[i - 1].distance[e] / half.rows[i].distance[e];
      CHECK(ratio == doctest::Approx(2.0).epsilon(0.15));
    }
  }

  const KorovkinReport strict = korovkin_check(0.5, Grid::with_points(0.0, 2.0, 5), {25, 50}, 1e-6);
  CHECK_FALSE(strict.passed());
}

TEST_CASE("derivatives") {
  const auto [d1, d2] = derivatives(FunctionSpec::expression("t^3"), 1.0);
  CHECK(d1 == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(d2 == doctest::Approx(6.0).epsilon(1e-6));
  const auto [e1, e2] = derivatives(FunctionSpec::expression("exp(-t)"), 2.0);
  CHECK(e1 == doctest::Approx(-std::exp(-2.0)).epsilon(1e-8));
  CHECK(e2 == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(derivatives(FunctionSpec::monomial(2), 1.5).second == 2.0);
  CHECK_THROWS_AS(derivatives(FunctionSpec::expression("t^3"), 5e-5), DomainError);
}

TEST_CASE("Voronovskaja: worked values") {
  const std::vector<int> n_list = {10, 20, 40, 80, 160, 320};
  const VoronovskajaReport e2 = voronovskaja(FunctionSpec::monomial(2), 1.0, 0.5, n_list);
  CHECK(e2.formula == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(e2.limit == doctest::Approx(8.0).epsilon(0.01));
  for (std::size_t i = 3; i < n_list.size(); ++i) {
    CHECK(e2.scaled_errors[i] == doctest::Approx(8.0 + 2.0 / (n_list[i] * 0.5)).epsilon(1e-8));
  }
  CHECK(e2.derivatives_analytic);

  for (double beta : {0.0, 0.5}) {
    const VoronovskajaReport e1 = voronovskaja(FunctionSpec::monomial(1), 1.0, beta, n_list);
    CHECK(e1.limit == doctest::Approx(1.0 / (1.0 - beta)).epsilon(0.01));
  }
  const VoronovskajaReport e0 = voronovskaja(FunctionSpec::monomial(0), 1.0, 0.25, {10, 20, 40});
  CHECK(std::fabs(e0.limit) <= 1e-8);

  const VoronovskajaReport expr = voronovskaja(FunctionSpec::expression("t^2"), 1.0, 0.5, {20, 40, 80});
  CHECK_FALSE(expr.derivatives_analytic);
  CHECK(expr.formula == doctest::Approx(8.0).epsilon(1e-6));

  CHECK_THROWS_AS(voronovskaja(FunctionSpec::monomial(2), 0.0, 0.5, n_list), DomainError);
  CHECK_THROWS_AS(voronovskaja(FunctionSpec::monomial(2), 1.0, 0.5, {10, 30}), DomainError);
}

TEST_CASE("Voronovskaja: the gap shrinks along doubling n") {
  // From n = 20: exp_decay at small x and beta = 0.5 is still pre-asymptotic
  // between 10 and 20.
  const std::vector<int> n_list = {20, 40, 80, 160, 320};
  for (const FunctionSpec& f : {FunctionSpec::monomial(1), FunctionSpec::monomial(2), FunctionSpec::monomial(3),
                                FunctionSpec::exp_decay()}) {
    for (double x : {0.5, 1.0, 2.0}) {
      for (double beta : {0.0, 0.5}) {
        CAPTURE(f.name());
        CAPTURE(x);
        CAPTURE(beta);
        const VoronovskajaReport report = voronovskaja(f, x, beta, n_list);
        CHECK(report.gap_decreasing());
      }
    }
  }
}

TEST_CASE("bound check: worked values") {
  const Grid grid = Grid::uniform(0.0, 4.0, 0.1);
  const BoundReport constant = bound_check(FunctionSpec::monomial(0), OperatorParams(50, 0.25), grid);
  CHECK(constant.lhs_sup <= 1e-11);
  CHECK(constant.minimal_c == 0.0);

  const BoundReport linear = bound_check(FunctionSpec::expression("2*t + 1"), OperatorParams(50, 0.0), grid);
  CHECK(linear.minimal_c == 0.0);
  CHECK(linear.inconclusive == 0);
  for (const BoundPoint& p : linear.points) CHECK(p.lhs <= p.omega_term + 1e-10);

  std::vector<double> cs;
  for (int n : {50, 100, 200}) {
    const BoundReport r = bound_check(FunctionSpec::exp_decay(), OperatorParams(n, 0.25), grid);
    CHECK(std::isfinite(r.minimal_c));
    CHECK(r.holds_with(10.0));
    cs.push_back(r.minimal_c);
  }
  const double lo = *std::min_element(cs.begin(), cs.end());
  const double hi = *std::max_element(cs.begin(), cs.end());
  CHECK((hi == 0.0 || hi <= 2.0 * lo));
}

TEST_CASE("bound check: the inequality holds with C = 10") {
  const Grid grid = Grid::uniform(0.0, 3.0, 0.25);
  for (const FunctionSpec& f : {FunctionSpec::exp_decay(), FunctionSpec::abs_kink(1.0), FunctionSpec::sin_bounded(),
                                FunctionSpec::step_smooth(1.5), FunctionSpec::expression("abs(sin(2*t))")}) {
    for (int n : {10, 40}) {
      for (double beta : {0.0, 0.3, 0.6}) {
        CAPTURE(f.name());
        CAPTURE(n);
        CAPTURE(beta);
        const BoundReport r = bound_check(f, OperatorParams(n, beta), grid);
        CHECK(r.holds_with(10.0));
        CHECK(r.minimal_c >= 0.0);
        for (const BoundPoint& p : r.points) {
          CHECK(p.omega2_term >= 0.0);
          CHECK(p.omega_term >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("order check") {
  const std::vector<int> n_list = {10, 20, 40, 80, 160};
  const OrderReport r1 = order_check(1, 0.5, 1.0, n_list);
  CHECK(r1.slope == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(r1.passed());
  const OrderReport r2 = order_check(2, 0.5, 1.0, n_list);
  CHECK(r2.slope == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(r2.passed());
  const OrderReport r3 = order_check(3, 0.5, 1.0, n_list);
  CHECK(r3.slope == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(r3.threshold == doctest::Approx(-1.85));
  CHECK(r3.passed());
  CHECK(order_check(4, 0.5, 1.0, n_list).passed());
  for (bool flag : r1.below_noise) CHECK_FALSE(flag);
  CHECK_THROWS_AS(order_check(2, 0.5, 0.0, n_list), DomainError);
}
