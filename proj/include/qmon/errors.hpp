#pragma once

#include <stdexcept>
#include <string>

namespace qmon {

/// Caller supplied something outside an operation's precondition.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input data (files, traces) is malformed or cannot support the request.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An internal numerical invariant failed (non-convergence, bound violated).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qmon
