#pragma once

// Arithmetic expressions in one variable t.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?          right-associative
//   unary  := '-'? atom
//   atom   := number | 't' | ident '(' args ')' | '(' expr ')'
//
// Functions: exp, sin, cos, abs, sqrt (one argument), min, max (two).
// Exponents must be constant subexpressions.

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "durr/error.hpp"

namespace durr {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::set<std::string> expected);

  /// Byte offset of the offending token (text size at end of input).
  std::size_t offset() const noexcept { return offset_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Division by zero or a non-finite result during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

class ExprAST {
 public:
  enum class Kind { constant, variable, negate, add, subtract, multiply, divide, power, call };

  struct Node {
    Kind kind = Kind::constant;
    double value = 0.0;     // constant
    std::string function;   // call
    std::vector<std::shared_ptr<const Node>> children;
  };

  explicit ExprAST(std::shared_ptr<const Node> root);

  const Node& root() const noexcept { return *root_; }

  double eval(double t) const;

  /// Fully parenthesized text; parsing it yields a structurally equal tree.
  std::string to_string() const;

  bool structurally_equal(const ExprAST& other) const;

 private:
  std::shared_ptr<const Node> root_;
};

ExprAST parse_expr(std::string_view text);

}  // namespace durr
