#include "acnc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "acnc/errors.hpp"
#include "reduce_ld.hpp"

namespace acnc {

double StepReport::res_max() const { return std::max({res_phi, res_aux, res_zeta}); }

Field extrapolate(const Field& prev, const Field& prev2) {
    return lincomb(1.5, prev, -0.5, prev2);
}

namespace {

// Pointwise g = dq/dphi evaluated on a field.
Field g_of(const Field& phi, const ModelParams& p) {
    const int n = phi.n();
    Field g(phi.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            g(i, j) = eq_aux(phi(i, j), p).g;
        }
    }
    return g;
}

using detail::inner_ld;
using detail::quad_ld;

// One CN step. `use_extrapolation` selects the second-order midpoint
// coefficient (3/2 g^n - 1/2 g^{n-1}); the startup step evaluates the
// coefficient at phi^0 instead. Eliminating the auxiliary updates into the
// phi equation and dividing by M dt yields
//   [1/(M dt) + gamma2] phi' - (gamma1/2) Lap phi' + diag phi' + rank-one(phi') = b,
// which woodbury_solve handles; the auxiliaries are then advanced
// algebraically and the original scheme equations are re-evaluated to report
// residuals.
std::pair<SchemeState, StepReport> take_step(const SchemeState& state, const ModelParams& p,
                                             double dt, const SolverOptions& opts,
                                             bool use_extrapolation) {
    p.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const Field& phi = state.phi;
    const Grid grid = phi.grid();
    const int n = grid.n;
    const double mdt = p.mobility * dt;
    const double inv_mdt = 1.0 / mdt;
    const bool penalty = p.constraint == Constraint::Penalty;
    const bool lagrange = p.constraint == Constraint::Lagrange;
    const double sqrt_eta = penalty ? std::sqrt(p.eta) : 0.0;

    // Extrapolated nonlinear coefficient field: gbar (EQ) or sbar (SAV),
    // both built as (3/2) f(phi^n) - (1/2) f(phi^{n-1}) so the two methods
    // mirror each other; the startup step evaluates at phi^0 only.
    Field coeff(grid);
    if (p.method == Method::EQ) {
        if (!state.q) throw std::invalid_argument("EQ step: state has no q field");
        coeff = use_extrapolation
                    ? lincomb(1.5, g_of(phi, p), -0.5, g_of(state.phi_prev, p))
                    : g_of(phi, p);
    } else {
        coeff = use_extrapolation
                    ? lincomb(1.5, sav_aux(phi, p).s, -0.5, sav_aux(state.phi_prev, p).s)
                    : sav_aux(phi, p).s;
    }
    apply_neumann_bc(coeff);

    // Known part K of mu-tilde at the half step, then b = phi/(M dt) - K.
    const Field lap_phi = laplacian_h(phi);
    Field known(grid);
    const long double wsum_phi = p.method == Method::SAV ? inner_ld(coeff, phi) : 0.0L;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            long double k = -0.5L * p.gamma1 * lap_phi(i, j) +
                            static_cast<long double>(p.gamma2) * phi(i, j);
            if (p.method == Method::EQ) {
                const long double g = coeff(i, j);
                k += 2.0L * g * (*state.q)(i, j) - g * g * phi(i, j);
            } else {
                k += static_cast<long double>(coeff(i, j)) * (2.0L * state.r - wsum_phi);
            }
            known(i, j) = static_cast<double>(k);
        }
    }
    long double known_shift = 0.0L;  // constant added to b on every cell
    if (penalty) {
        known_shift = -(static_cast<long double>(sqrt_eta) * state.zeta -
                        0.5L * p.eta * quad_ld(phi));
    } else if (lagrange) {
        known_shift = quad_ld(known);
    }
    Field b(grid);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            b(i, j) = static_cast<double>(static_cast<long double>(inv_mdt) * phi(i, j) -
                                          known(i, j) + known_shift);
        }
    }

    LocalOperator A{grid, inv_mdt + p.gamma2, 0.5 * p.gamma1, std::nullopt};
    if (p.method == Method::EQ) {
        Field diag(grid);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                diag(i, j) = coeff(i, j) * coeff(i, j);
            }
        }
        A.diag = std::move(diag);
    }

    std::vector<RankOneTerm> terms;
    Field ones(grid);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) ones(i, j) = 1.0;
    }
    if (p.method == Method::SAV) {
        terms.push_back({coeff, coeff, 1.0});
    }
    if (penalty) {
        terms.push_back({ones, ones, 0.5 * p.eta});
    } else if (lagrange) {
        Field w(grid);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                const double c = coeff(i, j);
                w(i, j) = p.method == Method::EQ ? p.gamma2 + c * c : p.gamma2;
            }
        }
        if (p.method == Method::SAV) {
            const double mean_s = quad(coeff);
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) w(i, j) += mean_s * coeff(i, j);
            }
        }
        terms.push_back({ones, std::move(w), -1.0});
    }

    // The inner solves must sit below the accepted-step residual bound;
    // res_phi scales as M dt times the eliminated-system residual. The
    // extended-precision refinement in woodbury_solve certifies absolute
    // residuals far below eps * ||b||, so no relative floor is imposed.
    const double norm_phi = norm(phi, NormKind::L2);
    const double norm_b = norm(b, NormKind::L2);
    double tol = opts.tol;
    if (norm_b > 0.0) {
        const double target = 0.3 * kResidualTol * (1.0 + norm_phi) / (mdt * norm_b);
        tol = std::max(std::min(tol, target), 1e-18);
    }

    SolveStats stats;
    Field phi_new = woodbury_solve(A, terms, b, tol, &stats, opts.jacobi);
    apply_neumann_bc(phi_new);

    // Algebraic auxiliary updates.
    Field dphi = lincomb(1.0, phi_new, -1.0, phi);
    SchemeState next{phi_new, phi, std::nullopt, state.r, state.zeta, state.v0, state.step + 1};
    if (p.method == Method::EQ) {
        Field q_new(grid);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                q_new(i, j) = (*state.q)(i, j) + coeff(i, j) * dphi(i, j);
            }
        }
        apply_neumann_bc(q_new);
        next.q = std::move(q_new);
    } else {
        next.r = static_cast<double>(state.r + inner_ld(coeff, dphi));
    }
    if (penalty) {
        next.zeta = state.zeta + sqrt_eta * quad(dphi);
    }

    // Substitute the updated unknowns back into the un-eliminated equations.
    StepReport rep;
    rep.step = next.step;
    rep.t = static_cast<double>(next.step) * dt;
    rep.cg_iters = stats.iterations;
    {
        Field phi_half = lincomb(0.5, phi_new, 0.5, phi);
        apply_neumann_bc(phi_half);
        const Field lap_half = laplacian_h(phi_half);
        std::vector<long double> mu_half(static_cast<std::size_t>(n) * n);
        std::size_t at = 0;
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                long double mu = -static_cast<long double>(p.gamma1) * lap_half(i, j) +
                                 2.0L * p.gamma2 * phi_half(i, j);
                if (p.method == Method::EQ) {
                    mu += (static_cast<long double>((*state.q)(i, j)) + (*next.q)(i, j)) *
                          coeff(i, j);
                } else {
                    mu += (static_cast<long double>(state.r) + next.r) * coeff(i, j);
                }
                mu_half[at++] = mu;
            }
        }
        long double shift = 0.0L;
        if (penalty) shift = static_cast<long double>(sqrt_eta) * 0.5L * (state.zeta + next.zeta);
        if (lagrange) {
            long double sum = 0.0L;
            for (const long double v : mu_half) sum += v;
            shift = -(static_cast<long double>(grid.h) * grid.h) * sum;
        }
        Field res(grid);
        at = 0;
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                res(i, j) = static_cast<double>(
                    dphi(i, j) + static_cast<long double>(mdt) * (mu_half[at++] + shift));
            }
        }
        rep.res_phi = norm(res, NormKind::L2);
        if (p.method == Method::EQ) {
            Field res_q(grid);
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) {
                    res_q(i, j) = ((*next.q)(i, j) - (*state.q)(i, j)) - coeff(i, j) * dphi(i, j);
                }
            }
            rep.res_aux = norm(res_q, NormKind::L2);
        } else {
            rep.res_aux = std::abs(static_cast<double>(
                (static_cast<long double>(next.r) - state.r) - inner_ld(coeff, dphi)));
        }
        if (penalty) {
            rep.res_zeta = std::abs((next.zeta - state.zeta) - sqrt_eta * quad(dphi));
        }
    }
    rep.volume = quad(phi_new);
    rep.phi_norm_l2 = norm(phi_new, NormKind::L2);
    const EnergyPair e = discrete_energy(next, p);
    rep.energy_modified = e.modified;
    rep.energy_original = e.original;
    return {std::move(next), rep};
}

}  // namespace

std::pair<SchemeState, StepReport> startup_step(const SchemeState& state, const ModelParams& p,
                                                double dt, const SolverOptions& opts) {
    if (state.step != 0) throw std::invalid_argument("startup_step: state.step must be 0");
    return take_step(state, p, dt, opts, /*use_extrapolation=*/false);
}

std::pair<SchemeState, StepReport> step_eq(const SchemeState& state, const ModelParams& p,
                                           double dt, const SolverOptions& opts) {
    if (p.method != Method::EQ) throw std::invalid_argument("step_eq: params select SAV");
    if (state.step < 1) throw std::invalid_argument("step_eq: startup_step must run first");
    return take_step(state, p, dt, opts, /*use_extrapolation=*/true);
}

std::pair<SchemeState, StepReport> step_sav(const SchemeState& state, const ModelParams& p,
                                            double dt, const SolverOptions& opts) {
    if (p.method != Method::SAV) throw std::invalid_argument("step_sav: params select EQ");
    if (state.step < 1) throw std::invalid_argument("step_sav: startup_step must run first");
    return take_step(state, p, dt, opts, /*use_extrapolation=*/true);
}

SchemeState advance(SchemeState state, const ModelParams& p, double dt, long n_steps,
                    const StepObserver& observer, const SolverOptions& opts) {
    for (long k = 0; k < n_steps; ++k) {
        auto [next, rep] =
            state.step == 0
                ? startup_step(state, p, dt, opts)
                : (p.method == Method::EQ ? step_eq(state, p, dt, opts) : step_sav(state, p, dt, opts));

        const double scale = 1.0 + rep.phi_norm_l2;
        if (!(rep.res_max() <= kResidualTol * scale)) {
            throw InvariantViolation("step " + std::to_string(rep.step) + ": scheme residual " +
                                     detail::fmt_sci(rep.res_max()) + " exceeds " +
                                     detail::fmt_sci(kResidualTol * scale));
        }
        if (p.constraint == Constraint::Penalty) {
            const double expected = zeta_of(next.phi, next.v0, p.eta);
            if (!(std::abs(next.zeta - expected) <= 1e-9 * (1.0 + std::abs(next.zeta)))) {
                throw InvariantViolation("step " + std::to_string(rep.step) +
                                         ": zeta drifted from sqrt(eta)(V - V0)");
            }
        }

        state = std::move(next);
        if (observer) observer(rep);
    }
    return state;
}

}  // namespace acnc
