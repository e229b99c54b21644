#pragma once

#include <stdexcept>
#include <string>

namespace kdq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: config fields, CLI arguments, violated preconditions.
struct ValidationError : Error {
    using Error::Error;
};

// File contents do not match the expected format, version or checksum.
struct IntegrityError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Training produced a non-finite loss or could not proceed.
struct TrainingError : Error {
    using Error::Error;
};

// The sigma estimator could not satisfy the feature-distance constraint.
struct EstimatorError : Error {
    double achieved = 0.0;
    double tau = 0.0;
    EstimatorError(const std::string& msg, double achieved_, double tau_)
        : Error(msg), achieved(achieved_), tau(tau_) {}
};

// A metric is undefined for the given inputs (e.g. empty concept union).
struct UndefinedMetricError : Error {
    using Error::Error;
};

} // namespace kdq
