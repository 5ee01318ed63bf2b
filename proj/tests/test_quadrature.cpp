#include <doctest.h>

#include <cmath>
#include <vector>

#include "durr/quadrature.hpp"
#include "durr/error.hpp"

using namespace durr;

TEST_CASE("finite interval") {
  const QuadratureConfig cfg;
  const auto r = integrate([](double t) { return std::sin(t); }, 0.0, M_PI, cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.abs_error <= 1e-12);

  const auto kink = integrate([](double t) { return std::fabs(t - 0.3); }, 0.0, 1.0, cfg);
  CHECK(kink.converged);
  CHECK(kink.value == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(kink.panels > 1);
}

TEST_CASE("semi-infinite intervals") {
  const QuadratureConfig cfg;
  const auto gamma = integrate_to_infinity([](double t) { return t * t * t * std::exp(-t); }, 0.0, cfg);
  CHECK(gamma.converged);
  CHECK(gamma.value == doctest::Approx(6.0).epsilon(1e-12));

  const auto shifted = integrate_to_infinity([](double t) { return std::exp(-2.0 * t); }, 1.0, cfg);
  CHECK(shifted.value == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));

  // A narrow bump far from the origin needs the breakpoints.
  const std::vector<double> breaks{90.0, 100.0, 110.0};
  auto bump = [](double t) { return std::exp(-0.5 * (t - 100.0) * (t - 100.0)); };
  const auto split = integrate_semi_infinite(bump, breaks, cfg);
  CHECK(split.converged);
  CHECK(split.value == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("panel budget exhaustion is reported") {
  QuadratureConfig cfg;
  cfg.max_panels = 3;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-300;
  const auto r = integrate([](double t) { return std::sqrt(t) * std::sin(40.0 * t); }, 0.0, 3.0, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.panels <= 3);
}

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.max_panels = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
