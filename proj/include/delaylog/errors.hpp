#pragma once

#include <stdexcept>
#include <string>

namespace delaylog {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input or a violated precondition.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// The denominator 1 + beta*z_prev came within guard_epsilon of zero.
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// An iterate exceeded the overflow ceiling.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A formula needs a nonzero quantity that is (numerically) zero.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class OrbitTerminatedError : public Error {
public:
    using Error::Error;
};

class RecipeFailure : public Error {
public:
    using Error::Error;
};

} // namespace delaylog
