#pragma once

#include <stdexcept>
#include <string>

namespace posetlim {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transitive closure of the input pairs would contain a directed cycle.
struct CycleError : Error {
    using Error::Error;
};

/// Input relation was required to be transitively closed but is not.
struct NotClosedError : Error {
    using Error::Error;
};

struct EmptySubsetError : Error {
    using Error::Error;
};

struct SizeMismatchError : Error {
    using Error::Error;
};

struct SizeError : Error {
    using Error::Error;
};

/// Exact enumeration would exceed the configured work bound.
struct BudgetExceededError : Error {
    using Error::Error;
};

struct ParameterRangeError : Error {
    using Error::Error;
};

/// A relation that was expected to be a strict partial order is not one.
struct NotAPosetError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace posetlim
