#pragma once

#include <stdexcept>
#include <string>

namespace fwsparse {

// Base class for every error thrown by this library. Catching fwsparse::Error
// is enough to separate library failures from genuine std::runtime_error uses.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dictionary construction and validation.
struct ZeroColumnError : Error {
  using Error::Error;
};
struct NotUnitNormError : Error {
  using Error::Error;
};
struct NonFiniteError : Error {
  using Error::Error;
};
struct SingleAtomError : Error {
  using Error::Error;
};

// Argument outside its documented range (indices, m values, multipliers).
struct RangeError : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};

// Support-restricted dictionary is rank deficient; pseudoinverse-based
// quantities are undefined.
struct RankDeficientSupportError : Error {
  using Error::Error;
};
// The greedy refit selected linearly dependent atoms.
struct RankDeficientSelectionError : Error {
  using Error::Error;
};

// A theoretical quantity has no informative value for these inputs.
struct BoundVacuousError : Error {
  using Error::Error;
};
struct ConditionViolatedError : Error {
  using Error::Error;
};

// Numerically-zero vectors where a direction or ratio is required.
struct ZeroResidualError : Error {
  using Error::Error;
};
struct DegenerateDirectionError : Error {
  using Error::Error;
};
struct UndefinedRatioError : Error {
  using Error::Error;
};

// Trace validation received objects that do not belong together.
struct MismatchedTraceError : Error {
  using Error::Error;
};

// Bad user-facing configuration (CLI flags, config files, solver settings).
struct ConfigError : Error {
  using Error::Error;
};
// Filesystem and serialization failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace fwsparse
