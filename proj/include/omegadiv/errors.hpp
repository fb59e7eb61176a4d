#pragma once

#include <stdexcept>
#include <string>

namespace omegadiv {

/// Input outside the documented domain (bad parameters, negative surplus, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A proven property failed to hold numerically (missing bracket, wrong sign).
/// Indicates a bug or a parameter set outside double-precision range.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace omegadiv
