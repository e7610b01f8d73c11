#include "acnc/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace acnc {

Grid::Grid(int n_cells) : n(n_cells), h(1.0 / n_cells) {
    if (n_cells < 2) {
        throw std::invalid_argument("Grid: need n >= 2, got " + std::to_string(n_cells));
    }
}

bool operator==(const Grid& a, const Grid& b) { return a.n == b.n; }

void apply_neumann_bc(Field& f) {
    const int n = f.n();
    // Mirror in x for interior rows, then in y over the full index range so
    // the corners are filled too.
    for (int j = 1; j <= n; ++j) {
        f(0, j) = f(1, j);
        f(n + 1, j) = f(n, j);
    }
    for (int i = 0; i <= n + 1; ++i) {
        f(i, 0) = f(i, 1);
        f(i, n + 1) = f(i, n);
    }
}

Field laplacian_h(const Field& f) {
    const int n = f.n();
    const double inv_h2 = 1.0 / (f.grid().h * f.grid().h);
    Field out(f.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            out(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * inv_h2;
        }
    }
    return out;
}

namespace {
void check_same_grid(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) {
        throw std::invalid_argument("fields live on different grids (" + std::to_string(f.n()) +
                                    " vs " + std::to_string(g.n()) + ")");
    }
}
}  // namespace

double inner_l2(const Field& f, const Field& g) {
    check_same_grid(f, g);
    const int n = f.n();
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            sum += f(i, j) * g(i, j);
        }
    }
    return f.grid().h * f.grid().h * sum;
}

double grad_inner(const Field& f, const Field& g) {
    check_same_grid(f, g);
    const int n = f.n();
    const double h = f.grid().h;
    // [D_x f, D_x g]_x + [D_y f, D_y g]_y: each interior cell contributes the
    // average of the two adjacent edge-difference products per direction.
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double fxp = f(i + 1, j) - f(i, j);
            const double fxm = f(i, j) - f(i - 1, j);
            const double gxp = g(i + 1, j) - g(i, j);
            const double gxm = g(i, j) - g(i - 1, j);
            const double fyp = f(i, j + 1) - f(i, j);
            const double fym = f(i, j) - f(i, j - 1);
            const double gyp = g(i, j + 1) - g(i, j);
            const double gym = g(i, j) - g(i, j - 1);
            sum += 0.5 * (fxp * gxp + fxm * gxm + fyp * gyp + fym * gym);
        }
    }
    // The h^2 quadrature weight cancels one 1/h from each difference quotient.
    return sum;
}

double quad(const Field& f) {
    const int n = f.n();
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            sum += f(i, j);
        }
    }
    return f.grid().h * f.grid().h * sum;
}

double norm(const Field& f, NormKind kind) {
    switch (kind) {
        case NormKind::L2:
            return std::sqrt(inner_l2(f, f));
        case NormKind::Linf: {
            const int n = f.n();
            double m = 0.0;
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) {
                    m = std::max(m, std::abs(f(i, j)));
                }
            }
            return m;
        }
        case NormKind::H1:
            return std::sqrt(inner_l2(f, f) + grad_inner(f, f));
    }
    return 0.0;  // unreachable
}

Field lincomb(double a, const Field& f, double b, const Field& g) {
    check_same_grid(f, g);
    const int n = f.n();
    Field out(f.grid());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            out(i, j) = a * f(i, j) + b * g(i, j);
        }
    }
    return out;
}

void axpy(Field& y, double a, const Field& x) {
    check_same_grid(y, x);
    const int n = y.n();
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            y(i, j) += a * x(i, j);
        }
    }
}

}  // namespace acnc
