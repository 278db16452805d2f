#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fluxtune {

// Base class for everything the toolkit throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameter values or broken type invariants.
struct InvalidArgument : Error {
    using Error::Error;
};

// Config file rejected; `key` holds the dotted path of the offending entry.
struct ConfigError : Error {
    ConfigError(std::string key_path, const std::string& detail)
        : Error("config error at '" + key_path + "': " + detail), key(std::move(key_path)) {}
    std::string key;
};

// SQUID flux within the cutoff band around half-integer frustration, where
// the Josephson inductance model diverges.
struct FluxTooCloseToFrustration : Error {
    using Error::Error;
};

// Dispersive-shift comparison requested at zero qubit-resonator detuning.
struct ZeroDetuning : Error {
    using Error::Error;
};

// Photon distribution truncated with more than the allowed tail mass outside.
struct TruncationTooSmall : Error {
    using Error::Error;
};

// Loop geometries closer than the wire radius over too many filament pairs.
struct GeometryOverlap : Error {
    using Error::Error;
};

// Normal equations are rank deficient.
struct SingularJacobian : Error {
    using Error::Error;
};

// Optimizer hit its iteration cap without meeting the convergence test.
struct MaxIterationsExceeded : Error {
    using Error::Error;
};

// A spectrum column had no usable peak inside the search window.
struct NoPeakFound : Error {
    using Error::Error;
};

}  // namespace fluxtune
