#pragma once

#include <stdexcept>
#include <string>

namespace circlephase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (documents, function data).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for this kind of phase tree.
class UnsupportedKindError : public Error {
 public:
  using Error::Error;
};

/// Sphere point whose coordinates all vanish within the positivity threshold.
class DegeneratePointError : public Error {
 public:
  using Error::Error;
};

/// A resource limit (e.g. triangulation size) would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A map promised to be odd was observed not to be.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its depth limit; carries the best estimate so far.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double bestRe, double bestIm)
      : Error(what), best_re(bestRe), best_im(bestIm) {}

  double best_re;
  double best_im;
};

}  // namespace circlephase
