#pragma once

#include <stdexcept>
#include <string>

namespace tds {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape too small, shapes disagree, or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A smoothing or filter parameter violates its contract.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data is not finite.
class DataError : public Error {
public:
    using Error::Error;
};

/// An iterative or dense numerical routine failed.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double best_residual = 0.0, long iterations = 0)
        : Error(what), best_residual_(best_residual), iterations_(iterations) {}

    double best_residual() const noexcept { return best_residual_; }
    long iterations() const noexcept { return iterations_; }

private:
    double best_residual_;
    long iterations_;
};

/// Caller asked for something the configuration does not allow.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problem exceeds a documented size cap.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents. Line/column are 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0, long column = 0)
        : Error(what), line_(line), column_(column) {}

    long line() const noexcept { return line_; }
    long column() const noexcept { return column_; }

private:
    long line_;
    long column_;
};

}  // namespace tds
