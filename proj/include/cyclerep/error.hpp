#pragma once

#include <stdexcept>
#include <string>

namespace cyclerep {

/// Malformed input: asymmetric matrices, bad dimensions, degenerate pairs.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation (e.g. NaN).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class IndexError : public std::out_of_range {
 public:
  explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

/// Requested mode is incompatible with the data (e.g. area weights on a
/// complex without Euclidean geometry).
class ConfigurationError : public std::invalid_argument {
 public:
  explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Heron's formula on edge lengths that violate the triangle inequality.
class AreaUndefinedError : public std::domain_error {
 public:
  explicit AreaUndefinedError(const std::string& what) : std::domain_error(what) {}
};

/// A broken internal invariant; always a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace cyclerep
