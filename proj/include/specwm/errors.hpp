#pragma once

#include <stdexcept>

namespace specwm {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A weight vector that cannot be turned into a probability distribution
// (negative entry, NaN, zero total mass, fewer than two tokens).
struct InvalidDistributionError : Error { using Error::Error; };

// Two vectors that must live over the same vocabulary do not.
struct DimensionError : Error { using Error::Error; };

// The positive part (p - q)_+ carries (almost) no mass, so the rejection
// residual is undefined.
struct DegenerateResidualError : Error { using Error::Error; };

// A watermark code that is structurally broken (non-bijective rank vector,
// wrong length, non-finite entries).
struct InvalidCodeError : Error { using Error::Error; };

// An exact enumeration was requested for a vocabulary too large to enumerate.
struct EnumerationTooLargeError : Error { using Error::Error; };

// Caller passed an inconsistent combination of options.
struct ConfigError : Error { using Error::Error; };

// Malformed external input (files, tables, token ids out of range).
struct InputError : Error { using Error::Error; };

// A condition that is mathematically impossible was observed; indicates a
// bug, not bad input.
struct InternalInvariantError : Error { using Error::Error; };

}  // namespace specwm
