#pragma once

#include <stdexcept>
#include <string>

namespace gspnetmon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph input: unknown endpoint, self-loop, asymmetric weights.
class GraphError : public Error {
public:
    using Error::Error;
};

/// Out-of-range or inconsistent numeric parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Problem too large for the dense solver; use the Chebyshev path.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Telemetry stream has missing or duplicate records.
class TelemetryError : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// API called out of sequence (e.g. localize without a positive detection).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace gspnetmon
