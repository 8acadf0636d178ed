#pragma once

#include <stdexcept>
#include <string>

namespace rabispec {

/// Base of every error the toolkit throws. `kind()` is a stable
/// machine-readable tag used by the command-line front end.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

/// An iterative routine hit its iteration cap.
class ConvergenceError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "no_convergence"; }
};

class QuadratureError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "quadrature"; }
};

class TruncationLeakageError : public Error {
public:
  TruncationLeakageError(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  const char* kind() const noexcept override { return "truncation_leakage"; }
  double leakage() const noexcept { return leakage_; }

private:
  double leakage_;
};

/// Parity recursion could not decide which candidate is |g,n+1>.
class AmbiguousLabelError : public Error {
public:
  AmbiguousLabelError(const std::string& what, double first, double second)
      : Error(what), first_(first), second_(second) {}
  const char* kind() const noexcept override { return "ambiguous_label"; }
  double first_element() const noexcept { return first_; }
  double second_element() const noexcept { return second_; }

private:
  double first_;
  double second_;
};

class MissingLabelError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "missing_label"; }
};

class IllConditionedError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "ill_conditioned"; }
};

/// SQUID bias beyond the critical current; the inductance would be imaginary.
class ImaginaryInductanceError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "imaginary_inductance"; }
};

class ParseError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

}  // namespace rabispec
