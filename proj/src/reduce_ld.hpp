// Extended-precision field reductions, internal to the solver sources.
// The auxiliary-variable terms can reach ~1e8 at large time steps while the
// accepted-step residual bound sits near 1e-9; 80-bit accumulation keeps the
// right-side assembly, the rank-one functionals and the residual checks
// meaningful at that scale.
#pragma once

#include "acnc/grid.hpp"

namespace acnc::detail {

inline long double inner_ld(const Field& f, const Field& g) {
    const int n = f.n();
    long double sum = 0.0L;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            sum += static_cast<long double>(f(i, j)) * static_cast<long double>(g(i, j));
        }
    }
    const long double h = static_cast<long double>(f.grid().h);
    return h * h * sum;
}

inline long double quad_ld(const Field& f) {
    const int n = f.n();
    long double sum = 0.0L;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            sum += static_cast<long double>(f(i, j));
        }
    }
    const long double h = static_cast<long double>(f.grid().h);
    return h * h * sum;
}

}  // namespace acnc::detail
