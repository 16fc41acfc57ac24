#pragma once

#include <stdexcept>
#include <string>

namespace clms {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

class DefinitenessError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Step size outside the mean-square stable range.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double mu, double mu_max)
      : Error(what), mu_(mu), mu_max_(mu_max) {}

  double mu() const noexcept { return mu_; }
  double mu_max() const noexcept { return mu_max_; }

 private:
  double mu_;
  double mu_max_;
};

/// A closed form evaluated outside the region where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EnsembleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace clms
