// errors.hpp — Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace aggspec {

// Invalid or inconsistent physical/numerical parameters (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector/grid size mismatches between caller and callee.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested computation exceeds a configured resource cap (exit code 4).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative refinement (time step, basis size, series) failed to reach
// its tolerance within the configured limits (exit code 3).
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The time integrator produced a non-finite or growing state.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A correlation trace was handed to the Fourier stage before it decayed
// and the caller did not override.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace aggspec
