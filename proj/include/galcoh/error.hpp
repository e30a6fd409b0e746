#ifndef GALCOH_ERROR_HPP
#define GALCOH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace galcoh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different dimension or over different primes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An element does not belong to the ring model it is used with.
class ModelMismatch : public DimensionMismatch {
public:
    using DimensionMismatch::DimensionMismatch;
};

/// A value violates the documented precondition of a constructor or operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Supplied data does not cover what the requested check needs.
class IncompleteData : public Error {
public:
    using Error::Error;
};

} // namespace galcoh

#endif // GALCOH_ERROR_HPP
