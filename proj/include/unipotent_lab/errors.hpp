#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ulab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a configured size bound.
class ScaleError : public Error {
 public:
  ScaleError(const std::string& what, std::uint64_t cardinality)
      : Error("scale: " + what + " (cardinality " + std::to_string(cardinality) + ")"),
        cardinality_(cardinality) {}
  std::uint64_t cardinality() const { return cardinality_; }

 private:
  std::uint64_t cardinality_;
};

class FieldError : public Error {
 public:
  using Error::Error;
};

/// Randomised search ran out of budget without a verdict.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// The dominance recursion did not single out a unique new simple.
class LabelingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ulab
