#include "acnc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "acnc/errors.hpp"

namespace acnc {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " must be positive and finite");
        }
    };
    positive(gamma1, "gamma1");
    positive(gamma2, "gamma2");
    positive(mobility, "mobility");
    positive(c0, "c0");
    if (constraint == Constraint::Penalty) {
        positive(eta, "eta (required under the penalty constraint)");
    } else if (eta < 0.0 || !std::isfinite(eta)) {
        throw std::invalid_argument("eta must be nonnegative and finite");
    }
}

DoubleWell double_well(double phi, double gamma2) {
    const double om = 1.0 - phi;
    return {gamma2 * phi * phi * om * om, 2.0 * gamma2 * phi * om * (1.0 - 2.0 * phi)};
}

EqAux eq_aux(double phi, const ModelParams& p) {
    const auto [f, fp] = double_well(phi, p.gamma2);
    const double radicand = f - p.gamma2 * phi * phi + p.c0;
    if (!(radicand > 0.0)) {
        throw NonpositiveRadicand("eq_aux: f(phi) - gamma2 phi^2 + c0 = " + std::to_string(radicand) +
                                  " at phi = " + std::to_string(phi) + "; increase c0");
    }
    const double q = std::sqrt(radicand);
    return {q, (fp - 2.0 * p.gamma2 * phi) / (2.0 * q)};
}

SavAux sav_aux(const Field& phi, const ModelParams& p) {
    const int n = phi.n();
    Field density(phi.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double v = phi(i, j);
            density(i, j) = double_well(v, p.gamma2).f - p.gamma2 * v * v;
        }
    }
    const double e1 = quad(density);
    const double radicand = e1 + p.c0;
    if (!(radicand > 0.0)) {
        throw NonpositiveRadicand("sav_aux: E1(phi) + c0 = " + std::to_string(radicand) +
                                  "; increase c0");
    }
    const double r = std::sqrt(radicand);
    Field s(phi.grid());
    const double inv_2r = 1.0 / (2.0 * r);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double v = phi(i, j);
            s(i, j) = (double_well(v, p.gamma2).fprime - 2.0 * p.gamma2 * v) * inv_2r;
        }
    }
    return {e1, r, std::move(s)};
}

double zeta_of(const Field& phi, double v0, double eta) {
    return std::sqrt(eta) * (quad(phi) - v0);
}

double lagrange_multiplier(const Field& mu, const ModelParams&) {
    // Constant mobility cancels; |Omega| = 1 on the unit square.
    return quad(mu);
}

SchemeState init_state(Field phi0, const ModelParams& p) {
    p.validate();
    apply_neumann_bc(phi0);
    SchemeState state{phi0, phi0, std::nullopt, 0.0, 0.0, quad(phi0), 0};
    if (p.method == Method::EQ) {
        Field q(phi0.grid());
        const int n = phi0.n();
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                q(i, j) = eq_aux(phi0(i, j), p).q;
            }
        }
        apply_neumann_bc(q);
        state.q = std::move(q);
    } else {
        state.r = sav_aux(phi0, p).r;
    }
    return state;
}

EnergyPair discrete_energy(const SchemeState& state, const ModelParams& p) {
    const Field& phi = state.phi;
    const int n = phi.n();
    const double grad_term = 0.5 * p.gamma1 * grad_inner(phi, phi);

    // Pointwise densities keep the large c0 cancellation local to each cell
    // instead of between two large global sums.
    Field mod_density(phi.grid());
    Field orig_density(phi.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double v = phi(i, j);
            orig_density(i, j) = double_well(v, p.gamma2).f;
            mod_density(i, j) = p.gamma2 * v * v;
            if (p.method == Method::EQ) {
                const double qv = (*state.q)(i, j);
                mod_density(i, j) += qv * qv - p.c0;
            }
        }
    }

    double modified = grad_term + quad(mod_density);
    if (p.method == Method::SAV) {
        modified += state.r * state.r - p.c0;
    }
    double original = grad_term + quad(orig_density);
    if (p.constraint == Constraint::Penalty) {
        modified += 0.5 * state.zeta * state.zeta;
        const double dv = quad(phi) - state.v0;
        original += 0.5 * p.eta * dv * dv;
    }
    return {modified, original};
}

}  // namespace acnc
