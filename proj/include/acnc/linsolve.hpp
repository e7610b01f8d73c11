// Matrix-free solution of the per-step linear systems: an SPD local operator
// plus up to two rank-one nonlocal corrections, via conjugate gradients and
// the Sherman-Morrison-Woodbury identity.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "acnc/grid.hpp"

namespace acnc {

// alpha * I - beta * Lap_h + diag(.), acting on bc-consistent fields.
// alpha > 0, beta > 0 and diag >= 0 make it SPD w.r.t. inner_l2.
struct LocalOperator {
    Grid grid;
    double alpha;
    double beta;
    std::optional<Field> diag;
};

// Operator action on the interior; the Neumann bc is reapplied to a copy of x
// first, so stale ghosts in x are harmless. Output ghosts are unspecified.
Field apply_local(const LocalOperator& A, const Field& x);

// One nonlocal correction: contributes coeff * direction * quad(weight .* x)
// to the operator applied to x. The weight acts through the quadrature
// functional, i.e. quad(weight .* x) == inner_l2(weight, x).
struct RankOneTerm {
    Field direction;
    Field weight;
    double coeff;
};

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;  // final true-residual norm of the solved system
};

// Conjugate gradients for A x = b, stopping at ||A x - b||_2 <= tol ||b||_2.
// Deterministic for fixed inputs (x0 = 0, serial reductions). Throws
// NoConvergence when maxit is exhausted. maxit <= 0 selects 10 * grid.n.
Field cg_solve(const LocalOperator& A, const Field& b, double tol, int maxit = 0,
               SolveStats* stats = nullptr, bool jacobi = false);

// Solves (A + sum_k coeff_k direction_k quad(weight_k .* .)) x = b:
// base solves A y0 = b, A yk = direction_k with cg_solve, then the <=2x2
// capacitance system, combined as x = y0 - sum yk zeta_k. Throws
// SingularCapacitance when the capacitance determinant is below 1e-14 in
// magnitude, and propagates NoConvergence from the base solves.
Field woodbury_solve(const LocalOperator& A, std::span<const RankOneTerm> terms, const Field& b,
                     double tol, SolveStats* stats = nullptr, bool jacobi = false);

}  // namespace acnc
