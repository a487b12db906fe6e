#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace errdist {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidSize : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateErrors : public Error {
 public:
  using Error::Error;
};

class InfeasibleConstraint : public Error {
 public:
  using Error::Error;
};

class AllReplicationsFailed : public Error {
 public:
  using Error::Error;
};

/// The local design stayed numerically singular after every bandwidth widening.
class SingularDesign : public Error {
 public:
  SingularDesign(double x, std::optional<std::size_t> index = std::nullopt)
      : Error(describe(x, index)), x_(x), index_(index) {}

  double x() const noexcept { return x_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  static std::string describe(double x, std::optional<std::size_t> index) {
    std::string msg = "singular local design at x=" + std::to_string(x);
    if (index) msg += " (observation " + std::to_string(*index) + ")";
    return msg;
  }

  double x_;
  std::optional<std::size_t> index_;
};

}  // namespace errdist
