#ifndef WHICHPATH_ERRORS_H
#define WHICHPATH_ERRORS_H

#include <stdexcept>
#include <string>

namespace whichpath {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An aperture profile with a non-positive width.
struct InvalidProfileError : Error {
    using Error::Error;
};

/// A scalar argument outside its mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

/// A momentum shift that would move the pattern off its grid.
struct OutOfRangeError : Error {
    using Error::Error;
};

/// Physically inconsistent or degenerate construction parameters.
struct ConfigurationError : Error {
    using Error::Error;
};

/// A detector state with zero norm.
struct DegenerateStateError : Error {
    using Error::Error;
};

/// A channel label that does not exist in the model.
struct LookupError : Error {
    using Error::Error;
};

/// An operation called on an input that violates its precondition.
struct PreconditionError : Error {
    using Error::Error;
};

/// A matrix or table that failed a structural check (e.g. unitarity).
struct ValidationError : Error {
    using Error::Error;
};

/// A least-squares fit whose design matrix is numerically singular.
struct IllConditionedError : Error {
    using Error::Error;
};

/// A numerical result that violates a hard invariant (e.g. negative density).
struct NumericalError : Error {
    using Error::Error;
};

}  // namespace whichpath

#endif
