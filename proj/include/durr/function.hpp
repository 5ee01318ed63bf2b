#pragma once

#include <optional>
#include <string>
#include <vector>

#include "durr/expr.hpp"

namespace durr {

/// Upper bound on |f(t)| growth over [0, inf): bounded, or O((1+t)^degree).
struct GrowthClass {
  bool bounded = true;
  int degree = 0;

  /// Smallest constant C with |f(t)| <= C (1+t)^degree on the probe grid.
  double constant = 0.0;
};

/// A test function on [0, inf): a named builtin or a parsed expression.
class FunctionSpec {
 public:
  enum class Builtin { monomial, exp_decay, sin_bounded, abs_kink, step_smooth };

  /// e_r(t) = t^r, 0 <= r <= 5.
  static FunctionSpec monomial(int r);
  /// e^{-t}.
  static FunctionSpec exp_decay();
  /// sin(t) / (1 + t).
  static FunctionSpec sin_bounded();
  /// |t - c|.
  static FunctionSpec abs_kink(double c = 1.0);
  /// (1 + tanh(4 (t - c))) / 2, a smooth step centred at c.
  static FunctionSpec step_smooth(double c = 1.0);
  /// Parsed expression; the growth class is measured on a probe grid and
  /// DomainError is thrown when no polynomial bound of degree <= 8 holds.
  static FunctionSpec expression(const std::string& text);

  /// Builtin names e0..e5, exp_decay, sin_bounded, abs_kink[:c], step_smooth[:c].
  static FunctionSpec builtin(const std::string& name);

  double operator()(double t) const;

  /// Analytic derivative of order 1 or 2 for builtins; empty for expressions
  /// (and at the kink of abs_kink).
  std::optional<double> derivative(double t, int order) const;

  const GrowthClass& growth() const noexcept { return growth_; }
  bool is_builtin() const noexcept { return !expr_.has_value(); }
  Builtin builtin_kind() const noexcept { return builtin_; }
  /// Monomial order when this is e_r.
  std::optional<int> monomial_order() const;
  const std::string& name() const noexcept { return name_; }

  /// Points where f is not smooth (quadrature breakpoints).
  std::vector<double> kinks() const;

 private:
  FunctionSpec() = default;

  Builtin builtin_ = Builtin::monomial;
  int order_ = 0;
  double centre_ = 0.0;
  std::optional<ExprAST> expr_;
  GrowthClass growth_;
  std::string name_;
};

}  // namespace durr
