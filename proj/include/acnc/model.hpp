// Double-well physics, EQ/SAV auxiliary-variable algebra, nonlocal
// constraint quantities and the discrete energies of the schemes.
#pragma once

#include <optional>

#include "acnc/grid.hpp"

namespace acnc {

enum class Constraint { Classic, Penalty, Lagrange };
enum class Method { EQ, SAV };

struct ModelParams {
    double gamma1 = 0.2;    // conformational entropy strength
    double gamma2 = 10.0;   // double-well strength
    double mobility = 1.0;  // constant scalar mobility M
    double eta = 1e4;       // penalty strength (used when constraint == Penalty)
    double c0 = 1e4;        // quadratization shift
    Constraint constraint = Constraint::Lagrange;
    Method method = Method::EQ;

    // Throws std::invalid_argument on a nonpositive coefficient, or eta <= 0
    // under the Penalty constraint.
    void validate() const;
};

struct DoubleWell {
    double f;       // gamma2 * phi^2 (1-phi)^2
    double fprime;  // 2 gamma2 * phi (1-phi)(1-2phi)
};
DoubleWell double_well(double phi, double gamma2);

// Pointwise EQ auxiliary q = sqrt(f(phi) - gamma2 phi^2 + c0) and its
// derivative g = dq/dphi. Throws NonpositiveRadicand when the radicand <= 0.
struct EqAux {
    double q;
    double g;
};
EqAux eq_aux(double phi, const ModelParams& p);

// SAV auxiliaries of a field: e1 = quad(f(phi) - gamma2 phi^2),
// r = sqrt(e1 + c0), and s = (f'(phi) - 2 gamma2 phi) / (2 sqrt(e1 + c0))
// pointwise. Throws NonpositiveRadicand when e1 + c0 <= 0.
struct SavAux {
    double e1;
    double r;
    Field s;
};
SavAux sav_aux(const Field& phi, const ModelParams& p);

// Penalty constraint variable zeta = sqrt(eta) (quad(phi) - v0).
double zeta_of(const Field& phi, double v0, double eta);

// Lagrange multiplier for constant mobility on the unit square: the mean of
// the chemical potential, quad(mu) / |Omega| = quad(mu).
double lagrange_multiplier(const Field& mu, const ModelParams& p);

// Evolving tuple of one simulation: phi^n, phi^{n-1}, the auxiliary variable
// of the active method, the penalty variable, the initial volume and the step
// index. q is present iff method == EQ; r is meaningful iff method == SAV;
// zeta iff constraint == Penalty.
struct SchemeState {
    Field phi;
    Field phi_prev;
    std::optional<Field> q;
    double r = 0.0;
    double zeta = 0.0;
    double v0 = 0.0;
    long step = 0;
};

// Initial state: auxiliaries computed exactly from phi0 (q = q(phi0) per
// cell or r = sqrt(E1(phi0) + c0)), zeta = 0, v0 = quad(phi0).
SchemeState init_state(Field phi0, const ModelParams& p);

struct EnergyPair {
    double modified;  // quadratized energy the schemes provably dissipate
    double original;  // free energy gamma1/2 |grad phi|^2 + f(phi) (+ penalty term)
};
EnergyPair discrete_energy(const SchemeState& state, const ModelParams& p);

}  // namespace acnc
