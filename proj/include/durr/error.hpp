#pragma once

#include <stdexcept>
#include <string>

namespace durr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A closed form was requested beyond the orders that are tabulated.
class UnsupportedOrder : public Error {
 public:
  UnsupportedOrder(const std::string& family, int order, int max_order)
      : Error(family + ": order " + std::to_string(order) +
              " is outside the tabulated range [0, " +
              std::to_string(max_order) + "]"),
        order_(order),
        max_order_(max_order) {}

  int order() const noexcept { return order_; }
  int max_order() const noexcept { return max_order_; }

 private:
  int order_;
  int max_order_;
};

/// Parameters outside the family an algorithm is implemented for.
class UnsupportedParameters : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what + " (achieved error bound " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace durr
