#include "durr/function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace durr {

namespace {

// Log-spaced probes, 64 per decade on [1e-3, 1e6], plus t = 0.
std::vector<double> growth_probes() {
  std::vector<double> probes{0.0};
  for (int i = 0; i <= 9 * 64; ++i) probes.push_back(std::pow(10.0, -3.0 + i / 64.0));
  return probes;
}

GrowthClass measure_growth(const ExprAST& expr) {
  const auto probes = growth_probes();
  std::vector<double> values;
  values.reserve(probes.size());
  for (double t : probes) {
    double v = 0.0;
    try {
      v = std::abs(expr.eval(t));
    } catch (const EvalError& e) {
      throw DomainError(std::string("expression cannot be evaluated on [0, inf): ") + e.what());
    }
    values.push_back(v);
  }
  for (int degree = 0; degree <= 8; ++degree) {
    auto ratio = [&](std::size_t i) { return values[i] / std::pow(1.0 + probes[i], degree); };
    // Block maxima over the decades [1e3,1e4], [1e4,1e5], [1e5,1e6].
    double block[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (probes[i] < 1e3) continue;
      const int b = std::min(2, static_cast<int>(std::floor(std::log10(probes[i]) - 3.0)));
      block[b] = std::max(block[b], ratio(i));
    }
    if (block[2] <= 1.05 * block[1] && block[1] <= 1.05 * block[0]) {
      GrowthClass growth;
      growth.degree = degree;
      growth.bounded = degree == 0;
      for (std::size_t i = 0; i < probes.size(); ++i) growth.constant = std::max(growth.constant, ratio(i));
      growth.constant *= 1.05;
      return growth;
    }
  }
  throw DomainError("expression grows faster than (1+t)^8 on the probe grid");
}

}  // namespace

FunctionSpec FunctionSpec::monomial(int r) {
  if (r < 0 || r > 5) throw DomainError("monomial builtins are e0..e5");
  FunctionSpec f;
  f.builtin_ = Builtin::monomial;
  f.order_ = r;
  f.growth_ = {r == 0, r, 1.0};
  f.name_ = "e" + std::to_string(r);
  return f;
}

FunctionSpec FunctionSpec::exp_decay() {
  FunctionSpec f;
  f.builtin_ = Builtin::exp_decay;
  f.growth_ = {true, 0, 1.0};
  f.name_ = "exp_decay";
  return f;
}

FunctionSpec FunctionSpec::sin_bounded() {
  FunctionSpec f;
  f.builtin_ = Builtin::sin_bounded;
  f.growth_ = {true, 0, 1.0};
  f.name_ = "sin_bounded";
  return f;
}

FunctionSpec FunctionSpec::abs_kink(double c) {
  if (!(c >= 0.0)) throw DomainError("abs_kink centre must be >= 0");
  FunctionSpec f;
  f.builtin_ = Builtin::abs_kink;
  f.centre_ = c;
  f.growth_ = {false, 1, std::max(1.0, c)};
  f.name_ = "abs_kink";
  return f;
}

FunctionSpec FunctionSpec::step_smooth(double c) {
  FunctionSpec f;
  f.builtin_ = Builtin::step_smooth;
  f.centre_ = c;
  f.growth_ = {true, 0, 1.0};
  f.name_ = "step_smooth";
  return f;
}

FunctionSpec FunctionSpec::expression(const std::string& text) {
  FunctionSpec f;
  f.expr_ = parse_expr(text);
  f.growth_ = measure_growth(*f.expr_);
  f.name_ = text;
  return f;
}

FunctionSpec FunctionSpec::builtin(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  std::optional<double> parameter;
  if (colon != std::string::npos) {
    const std::string tail = name.substr(colon + 1);
    char* end = nullptr;
    parameter = std::strtod(tail.c_str(), &end);
    if (tail.empty() || end != tail.c_str() + tail.size()) throw DomainError("bad builtin parameter in '" + name + "'");
  }
  if (head.size() == 2 && head[0] == 'e' && head[1] >= '0' && head[1] <= '5' && !parameter) {
    return monomial(head[1] - '0');
  }
  if (head == "exp_decay" && !parameter) return exp_decay();
  if (head == "sin_bounded" && !parameter) return sin_bounded();
  if (head == "abs_kink") return abs_kink(parameter.value_or(1.0));
  if (head == "step_smooth" || head == "step-smooth") return step_smooth(parameter.value_or(1.0));
  throw DomainError("unknown builtin function '" + name + "'");
}

double FunctionSpec::operator()(double t) const {
  if (expr_) return expr_->eval(t);
  switch (builtin_) {
    case Builtin::monomial:
      return order_ == 0 ? 1.0 : std::pow(t, order_);
    case Builtin::exp_decay:
      return std::exp(-t);
    case Builtin::sin_bounded:
      return std::sin(t) / (1.0 + t);
    case Builtin::abs_kink:
      return std::abs(t - centre_);
    case Builtin::step_smooth:
      return 0.5 * (1.0 + std::tanh(4.0 * (t - centre_)));
  }
  return 0.0;
}

std::optional<double> FunctionSpec::derivative(double t, int order) const {
  if (expr_ || order < 1 || order > 2) return std::nullopt;
  switch (builtin_) {
    case Builtin::monomial: {
      const int r = order_;
      if (order == 1) return r == 0 ? 0.0 : r * std::pow(t, r - 1);
      return r < 2 ? 0.0 : r * (r - 1) * std::pow(t, r - 2);
    }
    case Builtin::exp_decay:
      return order == 1 ? -std::exp(-t) : std::exp(-t);
    case Builtin::sin_bounded: {
      const double p = 1.0 + t;
      if (order == 1) return std::cos(t) / p - std::sin(t) / (p * p);
      return -std::sin(t) / p - 2.0 * std::cos(t) / (p * p) + 2.0 * std::sin(t) / (p * p * p);
    }
    case Builtin::abs_kink:
      if (t == centre_) return std::nullopt;
      return order == 1 ? (t > centre_ ? 1.0 : -1.0) : 0.0;
    case Builtin::step_smooth: {
      const double th = std::tanh(4.0 * (t - centre_));
      const double sech2 = 1.0 - th * th;
      return order == 1 ? 2.0 * sech2 : -16.0 * th * sech2;
    }
  }
  return std::nullopt;
}

std::optional<int> FunctionSpec::monomial_order() const {
  if (!expr_ && builtin_ == Builtin::monomial) return order_;
  return std::nullopt;
}

std::vector<double> FunctionSpec::kinks() const {
  if (!expr_ && builtin_ == Builtin::abs_kink && centre_ > 0.0) return {centre_};
  return {};
}

}  // namespace durr
