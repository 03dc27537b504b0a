#pragma once

#include <stdexcept>
#include <string>

namespace segqa {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument values (non-binary masks, bad configs, NaN inputs, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Shape mismatches between arrays that must agree.
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

/// Failures while reading external datasets (NIfTI volumes, manifests, ...).
class IngestError : public Error {
 public:
  explicit IngestError(const std::string& what) : Error(what) {}
};

/// Failures during adversarial example generation.
class AttackError : public Error {
 public:
  explicit AttackError(const std::string& what) : Error(what) {}
};

/// Filesystem / serialization failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace segqa
