#pragma once

#include <stdexcept>
#include <string>

namespace irfk {

/// Base for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The monomial matrix of a node set is numerically singular.
class SingularFrame : public Error {
 public:
  using Error::Error;
};

/// A matrix that should be positive semidefinite has a negative eigenvalue.
class NotPsd : public Error {
 public:
  using Error::Error;
};

/// ij_constants was asked for an exponent with 2H an integer.
class IntegerTwoH : public Error {
 public:
  using Error::Error;
};

/// A measure does not annihilate the polynomials a formula requires.
class NotAnnihilating : public Error {
 public:
  using Error::Error;
};

/// A scalar exponent lies outside (0, k+1).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Real output was requested but the angular measure is not Hermitian.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// An operator exponent fails the spectrum condition for the requested order.
class Inadmissible : public Error {
 public:
  using Error::Error;
};

/// A configuration document is malformed; `path()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace irfk
