#pragma once

#include <stdexcept>
#include <string>

namespace heatbound {

// Exit codes used by the CLI; every library error maps to one of them.
enum class ExitCode : int { ok = 0, invariant_violation = 1, parameter = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::parameter; }
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Bound precondition violated (sigma range, lambda range, missing constant).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Operation not available for this domain variant or axis.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Riesz mean requested beyond the certified truncation of a spectrum.
class IncompleteSpectrumError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::numeric; }
};

}  // namespace heatbound
