#pragma once

#include <stdexcept>
#include <string>

namespace expfit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inadmissible input: bad files, unsorted or duplicate
/// abscissae, precondition violations on sizes or parameter ranges.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

/// Numeric failure: overflow of exp(k*t), root bracketing failure,
/// non-finite intermediate values.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

} // namespace expfit
