// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace boundlab {

/// Base class for all boundlab errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A parameter lies outside the mathematical domain of the requested
/// quantity (validity predicate violated, singular parameterization,
/// unreachable inversion target, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// The API was called incorrectly (missing argument, mismatched lengths,
/// empty grid, unsupported kernel for an exact method, ...).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

/// The request is well-formed but outside the generality this library
/// supports (e.g. per-index ranges of unequal width).
class UnsupportedError : public UsageError {
 public:
  explicit UnsupportedError(const std::string& what) : UsageError(what) {}
};

}  // namespace boundlab
