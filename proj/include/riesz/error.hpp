#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace riesz {

using cplx = std::complex<double>;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed frequencies, missing rules, invalid parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

// A computation that was well posed but could not be carried out numerically.
class NumericError : public Error {
 public:
  using Error::Error;
};

class RejectNonMonotone : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class MissingReference : public InputError {
 public:
  using InputError::InputError;
};

class NoEvalRule : public InputError {
 public:
  using InputError::InputError;
};

class NoBoundaryRule : public InputError {
 public:
  using InputError::InputError;
};

class TailHintMissing : public InputError {
 public:
  using InputError::InputError;
};

class TermBudgetExceeded : public NumericError {
 public:
  TermBudgetExceeded(std::size_t budget, double x)
      : NumericError("term budget of " + std::to_string(budget) +
                     " exceeded for cutoff x=" + std::to_string(x)),
        budget_(budget),
        x_(x) {}

  std::size_t budget() const noexcept { return budget_; }
  double cutoff() const noexcept { return x_; }

 private:
  std::size_t budget_;
  double x_;
};

// Carries the best value found so far and its error estimate.
class QuadratureFailed : public NumericError {
 public:
  QuadratureFailed(const std::string& what, cplx best, double err)
      : NumericError(what + " (best=" + std::to_string(best.real()) + "+" +
                     std::to_string(best.imag()) + "i, err=" + std::to_string(err) + ")"),
        best_(best),
        err_(err) {}

  cplx best() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  cplx best_;
  double err_;
};

class ExtrapolationDiverged : public NumericError {
 public:
  using NumericError::NumericError;
};

class NearPole : public NumericError {
 public:
  using NumericError::NumericError;
};

class NearDenominatorZero : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace riesz
