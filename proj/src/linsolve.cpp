#include "acnc/linsolve.hpp"

#include <cmath>
#include <stdexcept>

#include "acnc/errors.hpp"
#include "reduce_ld.hpp"

namespace acnc {

Field apply_local(const LocalOperator& A, const Field& x) {
    Field xb = x;
    apply_neumann_bc(xb);
    const int n = xb.n();
    const double inv_h2 = 1.0 / (A.grid.h * A.grid.h);
    Field out(A.grid);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double lap =
                (xb(i + 1, j) + xb(i - 1, j) + xb(i, j + 1) + xb(i, j - 1) - 4.0 * xb(i, j)) * inv_h2;
            double v = A.alpha * xb(i, j) - A.beta * lap;
            if (A.diag) v += (*A.diag)(i, j) * xb(i, j);
            out(i, j) = v;
        }
    }
    return out;
}

namespace {

using detail::inner_ld;

Field jacobi_apply(const LocalOperator& A, const Field& r) {
    const int n = r.n();
    const double stencil_diag = A.alpha + 4.0 * A.beta / (A.grid.h * A.grid.h);
    Field z(r.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double d = stencil_diag + (A.diag ? (*A.diag)(i, j) : 0.0);
            z(i, j) = r(i, j) / d;
        }
    }
    return z;
}

}  // namespace

Field cg_solve(const LocalOperator& A, const Field& b, double tol, int maxit, SolveStats* stats,
               bool jacobi) {
    if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be positive");
    if (maxit <= 0) maxit = 10 * A.grid.n;

    Field x(A.grid);
    const double norm_b = std::sqrt(inner_l2(b, b));
    if (norm_b == 0.0) {
        if (stats) *stats = {0, 0.0};
        return x;
    }
    const double target = tol * norm_b;

    Field r = b;
    Field z = jacobi ? jacobi_apply(A, r) : r;
    Field p = z;
    double rz = inner_l2(r, z);
    bool restart = false;

    for (int it = 1; it <= maxit; ++it) {
        Field Ap = apply_local(A, p);
        const double pAp = inner_l2(p, Ap);
        const double step = rz / pAp;
        axpy(x, step, p);
        axpy(r, -step, Ap);

        // Refresh the recurrence residual periodically so rounding drift
        // cannot fake convergence on long solves. Any replacement of r
        // invalidates the conjugacy recurrence, so the direction restarts.
        if (it % 50 == 0) {
            r = b;
            axpy(r, -1.0, apply_local(A, x));
            restart = true;
        }

        if (std::sqrt(inner_l2(r, r)) <= target) {
            Field rt = b;
            axpy(rt, -1.0, apply_local(A, x));
            const double true_norm = std::sqrt(inner_l2(rt, rt));
            if (true_norm <= target) {
                if (stats) *stats = {it, true_norm};
                return x;
            }
            r = std::move(rt);
            restart = true;
        }

        z = jacobi ? jacobi_apply(A, r) : r;
        const double rz_new = inner_l2(r, z);
        p = restart ? z : lincomb(1.0, z, rz_new / rz, p);
        restart = false;
        rz = rz_new;
    }

    Field rt = b;
    axpy(rt, -1.0, apply_local(A, x));
    throw NoConvergence(maxit, std::sqrt(inner_l2(rt, rt)) / norm_b);
}

Field woodbury_solve(const LocalOperator& A, std::span<const RankOneTerm> terms, const Field& b,
                     double tol, SolveStats* stats, bool jacobi) {
    const std::size_t m = terms.size();
    if (m > 2) throw std::invalid_argument("woodbury_solve: at most 2 rank-one terms supported");

    SolveStats acc;
    if (m == 0) {
        Field x = cg_solve(A, b, std::max(tol, 1e-15), 0, &acc, jacobi);
        if (stats) *stats = acc;
        return x;
    }

    // The base solves only need to contract the refinement loop; their floor
    // keeps each CG demand well inside what double precision can certify.
    const double tol_sub = std::max(0.1 * tol, 1e-13);
    SolveStats s;
    std::vector<Field> ys;
    ys.reserve(m);
    for (const RankOneTerm& t : terms) {
        ys.push_back(cg_solve(A, t.direction, tol_sub, 0, &s, jacobi));
        acc.iterations += s.iterations;
    }

    // Capacitance matrix (I + C V Y) with entries through the quadrature
    // functional quad(w .* y) = inner_l2(w, y).
    double cap[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            cap[k][l] += static_cast<double>(terms[k].coeff * inner_ld(terms[k].weight, ys[l]));
        }
    }
    double det = cap[0][0];
    if (m == 2) det = cap[0][0] * cap[1][1] - cap[0][1] * cap[1][0];
    if (std::abs(det) < 1e-14) {
        throw SingularCapacitance("capacitance determinant " + detail::fmt_sci(det));
    }

    auto cap_solve = [&](const double rhs[2], double zeta[2]) {
        if (m == 1) {
            zeta[0] = rhs[0] / cap[0][0];
        } else {
            zeta[0] = (rhs[0] * cap[1][1] - rhs[1] * cap[0][1]) / det;
            zeta[1] = (rhs[1] * cap[0][0] - rhs[0] * cap[1][0]) / det;
        }
    };

    // Corrected residual b - A x - sum c_k u_k quad(w_k .* x), assembled per
    // cell in extended precision: the rank-one contributions can dwarf the
    // residual itself.
    const int n = A.grid.n;
    auto corrected_residual = [&](const Field& x) {
        const Field ax = apply_local(A, x);
        long double cs[2] = {0.0L, 0.0L};
        for (std::size_t k = 0; k < m; ++k) {
            cs[k] = static_cast<long double>(terms[k].coeff) * inner_ld(terms[k].weight, x);
        }
        Field res(A.grid);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                long double v = static_cast<long double>(b(i, j)) - ax(i, j);
                for (std::size_t k = 0; k < m; ++k) {
                    v -= cs[k] * static_cast<long double>(terms[k].direction(i, j));
                }
                res(i, j) = static_cast<double>(v);
            }
        }
        return res;
    };

    // Combine and iteratively refine: the rank-one coefficients zeta can be
    // large, so one combination pass may amplify base-solve residuals past
    // tol ||b||; each refinement pass contracts the corrected residual.
    const double norm_b = std::sqrt(inner_l2(b, b));
    const double target = tol * norm_b;
    Field x(A.grid);
    constexpr int kMaxPasses = 12;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        Field res = corrected_residual(x);
        const double rnorm = std::sqrt(inner_l2(res, res));
        if (rnorm <= target) {
            acc.residual = rnorm;
            if (stats) *stats = acc;
            return x;
        }
        Field d = cg_solve(A, res, tol_sub, 0, &s, jacobi);
        acc.iterations += s.iterations;
        double rhs[2] = {0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            rhs[k] = static_cast<double>(terms[k].coeff * inner_ld(terms[k].weight, d));
        }
        double zeta[2];
        cap_solve(rhs, zeta);
        axpy(x, 1.0, d);
        for (std::size_t k = 0; k < m; ++k) {
            axpy(x, -zeta[k], ys[k]);
        }
    }
    const Field res = corrected_residual(x);
    throw NoConvergence(kMaxPasses,
                        std::sqrt(inner_l2(res, res)) / (norm_b > 0.0 ? norm_b : 1.0));
}

}  // namespace acnc
