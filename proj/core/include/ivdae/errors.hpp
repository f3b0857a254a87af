#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ivdae {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Matrix entries are NaN/Inf, a matrix is not square, or an argument is out of its domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// sE+A (or another step matrix) is numerically singular.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NotRegular : public Error {
 public:
  using Error::Error;
};

class TruncatedChain : public Error {
 public:
  using Error::Error;
};

/// E restricted to IV_{k+1} -> E[IV_k] is not bijective.
class IsomorphismFailure : public Error {
 public:
  using Error::Error;
};

/// A numerical self-check failed (residual above its bound, ill-posed fit, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// u0 is not in the consistent space; carries the distance and the nearest consistent point.
class InconsistentInitialValue : public Error {
 public:
  InconsistentInitialValue(const std::string& what, double distance, Eigen::VectorXd nearest)
      : Error(what), distance_(distance), nearest_(std::move(nearest)) {}
  double distance() const noexcept { return distance_; }
  const Eigen::VectorXd& nearest() const noexcept { return nearest_; }

 private:
  double distance_;
  Eigen::VectorXd nearest_;
};

}  // namespace ivdae
