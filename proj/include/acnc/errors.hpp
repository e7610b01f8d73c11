// Exception types shared across the solver library.
#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace acnc {

namespace detail {
inline std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}
}  // namespace detail

// Argument of a square root in an auxiliary-variable evaluation was <= 0,
// i.e. the quadratization shift c0 is too small for the trajectory.
struct NonpositiveRadicand : std::runtime_error {
    explicit NonpositiveRadicand(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver exhausted its iteration budget.
struct NoConvergence : std::runtime_error {
    int maxit;
    double residual;
    NoConvergence(int maxit_, double residual_)
        : std::runtime_error("conjugate gradient did not converge in " + std::to_string(maxit_) +
                             " iterations (relative residual " + detail::fmt_sci(residual_) + ")"),
          maxit(maxit_),
          residual(residual_) {}
};

// The small capacitance system of a low-rank-corrected solve is numerically singular.
struct SingularCapacitance : std::runtime_error {
    explicit SingularCapacitance(const std::string& what) : std::runtime_error(what) {}
};

// A scheme invariant (residual bound, auxiliary positivity, ...) failed on an accepted step.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// Malformed on-disk data.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Nonpositive error entry passed to a convergence-rate computation.
struct NonpositiveError : std::invalid_argument {
    explicit NonpositiveError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace acnc
