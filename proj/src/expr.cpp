#include "durr/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace durr {

namespace {

std::string describe(const std::set<std::string>& expected) {
  std::string out;
  for (const auto& token : expected) {
    if (!out.empty()) out += ", ";
    out += token;
  }
  return out;
}

const std::map<std::string, std::size_t, std::less<>>& function_arity() {
  static const std::map<std::string, std::size_t, std::less<>> table = {
      {"exp", 1}, {"sin", 1}, {"cos", 1}, {"abs", 1}, {"sqrt", 1}, {"min", 2}, {"max", 2}};
  return table;
}

using NodePtr = std::shared_ptr<const ExprAST::Node>;

NodePtr make(ExprAST::Kind kind, std::vector<NodePtr> children = {}, double value = 0.0, std::string fn = {}) {
  auto node = std::make_shared<ExprAST::Node>();
  node->kind = kind;
  node->value = value;
  node->function = std::move(fn);
  node->children = std::move(children);
  return node;
}

bool is_constant(const ExprAST::Node& node) {
  if (node.kind == ExprAST::Kind::variable) return false;
  for (const auto& child : node.children) {
    if (!is_constant(*child)) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::set<std::string> expected) {
    skip_space();
    throw ParseError(message, pos_, std::move(expected));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (accept('+')) {
        left = make(ExprAST::Kind::add, {left, term()});
      } else if (accept('-')) {
        left = make(ExprAST::Kind::subtract, {left, term()});
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = factor();
    while (true) {
      if (accept('*')) {
        left = make(ExprAST::Kind::multiply, {left, factor()});
      } else if (accept('/')) {
        left = make(ExprAST::Kind::divide, {left, factor()});
      } else {
        return left;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    skip_space();
    const std::size_t exponent_offset = pos_ + 1;
    if (accept('^')) {
      NodePtr exponent = factor();
      if (!is_constant(*exponent)) {
        throw ParseError("exponent must be a constant expression", exponent_offset, {"constant"});
      }
      return make(ExprAST::Kind::power, {base, exponent});
    }
    return base;
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprAST::Kind::negate, {atom()});
    return atom();
  }

  NodePtr atom() {
    skip_space();
    static const std::set<std::string> kAtomStart = {"number", "t", "function", "("};
    if (pos_ >= text_.size()) fail("unexpected end of input", kAtomStart);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("missing closing parenthesis", {")"});
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "t") return make(ExprAST::Kind::variable);
      const auto& table = function_arity();
      const auto it = table.find(name);
      if (it == table.end()) throw UnknownIdentifier(name, start);
      if (!accept('(')) fail("expected '(' after function name", {"("});
      std::vector<NodePtr> args;
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("missing closing parenthesis", {")", ","});
      if (args.size() != it->second) {
        throw ParseError(name + " takes " + std::to_string(it->second) + " argument(s), got " +
                             std::to_string(args.size()),
                         start, {});
      }
      return make(ExprAST::Kind::call, std::move(args), 0.0, name);
    }
    fail(std::string("unexpected character '") + c + "'", kAtomStart);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(literal.c_str(), &end);
    if (end != literal.c_str() + literal.size()) {
      throw ParseError("malformed number '" + literal + "'", start, {"number"});
    }
    return make(ExprAST::Kind::constant, {}, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw EvalError(std::string("non-finite result in ") + what);
  return value;
}

double evaluate(const ExprAST::Node& node, double t) {
  using Kind = ExprAST::Kind;
  switch (node.kind) {
    case Kind::constant:
      return node.value;
    case Kind::variable:
      return t;
    case Kind::negate:
      return -evaluate(*node.children[0], t);
    case Kind::add:
      return evaluate(*node.children[0], t) + evaluate(*node.children[1], t);
    case Kind::subtract:
      return evaluate(*node.children[0], t) - evaluate(*node.children[1], t);
    case Kind::multiply:
      return evaluate(*node.children[0], t) * evaluate(*node.children[1], t);
    case Kind::divide: {
      const double denominator = evaluate(*node.children[1], t);
      if (denominator == 0.0) throw EvalError("division by zero");
      return evaluate(*node.children[0], t) / denominator;
    }
    case Kind::power:
      return checked(std::pow(evaluate(*node.children[0], t), evaluate(*node.children[1], t)), "power");
    case Kind::call: {
      const double a = evaluate(*node.children[0], t);
      const std::string& f = node.function;
      if (f == "exp") return checked(std::exp(a), "exp");
      if (f == "sin") return std::sin(a);
      if (f == "cos") return std::cos(a);
      if (f == "abs") return std::abs(a);
      if (f == "sqrt") return checked(std::sqrt(a), "sqrt");
      const double b = evaluate(*node.children[1], t);
      if (f == "min") return std::min(a, b);
      if (f == "max") return std::max(a, b);
      throw EvalError("unknown function " + f);
    }
  }
  throw EvalError("corrupt expression node");
}

void print(const ExprAST::Node& node, std::string& out) {
  using Kind = ExprAST::Kind;
  auto binary = [&](const char* op) {
    out += '(';
    print(*node.children[0], out);
    out += op;
    print(*node.children[1], out);
    out += ')';
  };
  switch (node.kind) {
    case Kind::constant: {
      char buffer[32];
      std::snprintf(buffer, sizeof buffer, "%.17g", node.value);
      out += buffer;
      return;
    }
    case Kind::variable:
      out += 't';
      return;
    case Kind::negate:
      out += "(-";
      print(*node.children[0], out);
      out += ')';
      return;
    case Kind::add:
      return binary(" + ");
    case Kind::subtract:
      return binary(" - ");
    case Kind::multiply:
      return binary(" * ");
    case Kind::divide:
      return binary(" / ");
    case Kind::power:
      return binary(" ^ ");
    case Kind::call:
      out += node.function;
      out += '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i > 0) out += ", ";
        print(*node.children[i], out);
      }
      out += ')';
      return;
  }
}

bool equal(const ExprAST::Node& a, const ExprAST::Node& b) {
  if (a.kind != b.kind || a.function != b.function || a.children.size() != b.children.size()) return false;
  if (a.kind == ExprAST::Kind::constant && a.value != b.value) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset, std::set<std::string> expected)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message +
            (expected.empty() ? std::string() : " (expected " + describe(expected) + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(const std::string& name, std::size_t offset)
    : ParseError("unknown identifier '" + name + "'", offset, {"t", "exp", "sin", "cos", "abs", "sqrt", "min", "max"}),
      name_(name) {}

ExprAST::ExprAST(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double ExprAST::eval(double t) const { return evaluate(*root_, t); }

std::string ExprAST::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool ExprAST::structurally_equal(const ExprAST& other) const { return equal(*root_, *other.root_); }

ExprAST parse_expr(std::string_view text) { return ExprAST(Parser(text).parse()); }

}  // namespace durr
