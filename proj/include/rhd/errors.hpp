#pragma once

#include <stdexcept>
#include <string>

namespace rhd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A physical parameter violates its admissibility constraint.
struct ParamError : Error {
    explicit ParamError(const std::string& field)
        : Error("invalid parameter: " + field), field(field) {}
    std::string field;
};

// Pointwise input outside the admissible domain (e.g. non-positive density).
struct DomainError : Error {
    using Error::Error;
};

// A state conversion would produce non-positive density or temperature.
struct PositivityError : Error {
    using Error::Error;
};

// Polished eigenvalue residual exceeded tolerance.
struct RootFailure : Error {
    using Error::Error;
};

// Two spectral branches coalesced; explicit projector formulas unusable.
struct DegenerateSpectrum : Error {
    using Error::Error;
};

// Time stepper diagnostic left the configured bounds.
struct StabilityError : Error {
    using Error::Error;
};

// Quadrature tail estimate too large relative to the integral.
struct QuadratureError : Error {
    using Error::Error;
};

// A least-squares fit is inconsistent with the expected power law.
struct FitError : Error {
    using Error::Error;
};

// Lyapunov functional left its norm-equivalence window.
struct EquivalenceError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace rhd
