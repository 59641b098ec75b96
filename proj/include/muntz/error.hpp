#pragma once

#include <stdexcept>
#include <string>

namespace muntz {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad parameters, argument outside the
/// domain, parameter-shift inequality failed). The CLI maps these to exit 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at an endpoint where a prefactor with negative exponent blows up.
class SingularityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The computation itself failed (non-convergence, overflow, singular
/// system). The CLI maps these to exit 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public NumericError {
 public:
  OverflowError(const std::string& what, int index)
      : NumericError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : NumericError(what), achieved_(achieved) {}
  /// Residual norm or error estimate reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace detail
}  // namespace muntz
