#pragma once

#include <stdexcept>
#include <string>

namespace qkm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Resource limits exceeded (qubit cap, permutation bound, ...).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An operation precondition was violated (bad index, aliased registers,
/// invalid argument value, target register not in |0...0>).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input that cannot be processed at all, e.g. a zero vector that has no
/// amplitude encoding.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Dimension or size mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Problems with dataset content: missing labels, single-class training
/// data, non-finite values, insufficient rows.
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& message, long line)
        : Error(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
          line_(line) {}
    explicit ParseError(const std::string& message) : ParseError(message, 0) {}

    long line() const { return line_; }

private:
    long line_ = 0;
};

} // namespace qkm
