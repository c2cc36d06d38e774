#pragma once

#include <stdexcept>
#include <string>

namespace grasspack {

// Error taxonomy for the whole library. Everything derives from Error so
// callers can catch the family with one handler.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input matrix has an impossible shape (k > n, empty, plane too wide for the
// default policy).
struct DimensionError : Error {
    using Error::Error;
};

// Two operands live in incompatible spaces.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Numerical rank of the input rows is below the requested plane dimension.
struct RankDeficient : Error {
    using Error::Error;
};

// Scalar argument outside the domain of a formula.
struct DomainError : Error {
    using Error::Error;
};

// Bracket scan found no sign change for a root finder.
struct NoRoot : Error {
    using Error::Error;
};

// The cap angle reached pi/2, where the density vanishes identically and
// mass estimates would divide by zero.
struct DegenerateBeta : Error {
    using Error::Error;
};

// A stated precondition was violated by the caller.
struct PreconditionViolation : Error {
    using Error::Error;
};

// A Monte-Carlo estimate came out empty (ball missed by every sample).
struct InsufficientSamples : Error {
    using Error::Error;
};

} // namespace grasspack
