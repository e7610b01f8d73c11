// Crank-Nicolson time steppers: EQ and SAV variants of the penalty,
// Lagrange-multiplier and unconstrained Allen-Cahn models, each reduced to
// one low-rank-corrected linear solve per step.
#pragma once

#include <functional>
#include <utility>

#include "acnc/linsolve.hpp"
#include "acnc/model.hpp"

namespace acnc {

struct SolverOptions {
    double tol = 1e-10;  // relative residual target of the inner CG solves
    int maxit = 0;       // 0 -> 10 * n
    bool jacobi = false;
};

// Every accepted step must satisfy the un-eliminated scheme equations with
// per-equation L2 residuals <= kResidualTol * (1 + ||phi^{n+1}||_2).
inline constexpr double kResidualTol = 1e-9;

struct StepReport {
    long step = 0;
    double t = 0.0;
    double volume = 0.0;
    double energy_modified = 0.0;
    double energy_original = 0.0;
    double phi_norm_l2 = 0.0;  // ||phi^{n+1}||_2, the residual scale
    int cg_iters = 0;
    // L2 residuals from substituting the updated unknowns back into the
    // scheme equations: the phi transport equation, the auxiliary (q or r)
    // update, and the zeta update (0 when no penalty variable exists).
    double res_phi = 0.0;
    double res_aux = 0.0;
    double res_zeta = 0.0;

    double res_max() const;
};

// Second-order extrapolation to the half step: (3/2) prev - (1/2) prev2.
Field extrapolate(const Field& prev, const Field& prev2);

// First step from exact initial auxiliaries, using the same CN formulas with
// the extrapolation replaced by the value at phi^0. Locally first order.
std::pair<SchemeState, StepReport> startup_step(const SchemeState& state, const ModelParams& p,
                                                double dt, const SolverOptions& opts = {});

// One CN step of the EQ schemes (requires state.step >= 1, method == EQ).
std::pair<SchemeState, StepReport> step_eq(const SchemeState& state, const ModelParams& p,
                                           double dt, const SolverOptions& opts = {});

// One CN step of the SAV schemes (requires state.step >= 1, method == SAV).
std::pair<SchemeState, StepReport> step_sav(const SchemeState& state, const ModelParams& p,
                                            double dt, const SolverOptions& opts = {});

using StepObserver = std::function<void(const StepReport&)>;

// Runs n_steps steps (startup first when state.step == 0), invoking the
// observer with each report in step order. Aborts with InvariantViolation on
// the first violated step invariant (residual bound, auxiliary positivity,
// penalty zeta consistency).
SchemeState advance(SchemeState state, const ModelParams& p, double dt, long n_steps,
                    const StepObserver& observer = {}, const SolverOptions& opts = {});

}  // namespace acnc
