#pragma once

#include <stdexcept>
#include <string>

namespace piv {

/// Root of the toolkit's exception hierarchy. The CLI maps each branch to a
/// stable exit code: ParameterError -> 1, IoError -> 2, NumericError -> 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Window, tile or grid does not fit the image it is applied to.
class DimensionError : public ParameterError {
public:
  using ParameterError::ParameterError;
};

class IoError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

} // namespace piv
