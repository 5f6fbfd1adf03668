#pragma once

#include <stdexcept>
#include <string>

namespace anglerefit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed: bad labels, non-finite features, shape mismatches.
class DataValidationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A loss derivative vanished or became non-finite where the probability
/// link needs 1/l'(u).
class DegenerateDerivativeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or version-mismatched model / data document.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace anglerefit
