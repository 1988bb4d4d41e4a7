#pragma once

#include <stdexcept>
#include <string>

namespace entloc {

/// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, labels or dimensions that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input documents (state files, protocol files, configs).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A value violates a mathematical precondition (normalization, positivity, unitarity, ranges).
class ValueError : public Error {
public:
    using Error::Error;
};

}  // namespace entloc
