#pragma once

#include <stdexcept>
#include <string>

namespace kelvsim {

// Bad construction input (trace defect, malformed spec, missing target, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Time stepper failed (step-size underflow, NaN state). Carries the failure time.
struct IntegrationError : std::runtime_error {
    double time;
    int mode_index;  // -1 when not ensemble-related
    IntegrationError(const std::string& what, double t, int mode = -1)
        : std::runtime_error(what), time(t), mode_index(mode) {}
};

// Ensemble state violates a structural assumption at evaluation time
// (e.g. point symmetry broken beyond tolerance).
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kelvsim
