#pragma once

#include <stdexcept>
#include <string>

#include "filippov/geometry.hpp"

namespace filippov {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input or model description. The CLI maps it to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Anything that goes wrong while computing. The CLI maps it to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define FILIPPOV_NUMERICAL_ERROR(Name)                      \
    class Name : public NumericalError {                    \
    public:                                                 \
        explicit Name(const std::string& what) : NumericalError(#Name ": " + what) {} \
    };

FILIPPOV_NUMERICAL_ERROR(NotOnSigma)
FILIPPOV_NUMERICAL_ERROR(NotTangent)
FILIPPOV_NUMERICAL_ERROR(NotSlidingRegion)
FILIPPOV_NUMERICAL_ERROR(DegenerateDenominator)
FILIPPOV_NUMERICAL_ERROR(EventAmbiguity)
FILIPPOV_NUMERICAL_ERROR(NoConvergence)
FILIPPOV_NUMERICAL_ERROR(NotASaddle)
FILIPPOV_NUMERICAL_ERROR(NoFold)
FILIPPOV_NUMERICAL_ERROR(NoReturn)
FILIPPOV_NUMERICAL_ERROR(DomainError)
FILIPPOV_NUMERICAL_ERROR(InsufficientSamples)
FILIPPOV_NUMERICAL_ERROR(Inconclusive)
FILIPPOV_NUMERICAL_ERROR(DegenerateConfiguration)
FILIPPOV_NUMERICAL_ERROR(NotClosed)
FILIPPOV_NUMERICAL_ERROR(FewerIntersections)
FILIPPOV_NUMERICAL_ERROR(BracketFailure)

#undef FILIPPOV_NUMERICAL_ERROR

class StepSizeUnderflow : public NumericalError {
public:
    StepSizeUnderflow(double t, Vec2 last_good)
        : NumericalError("StepSizeUnderflow: step size collapsed at t=" + std::to_string(t)),
          t(t), last_good(last_good) {}
    double t;
    Vec2 last_good;
};

class UnknownRegion : public ConfigError {
public:
    explicit UnknownRegion(const std::string& name) : ConfigError("UnknownRegion: " + name) {}
};

}  // namespace filippov
