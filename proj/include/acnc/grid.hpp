// Cell-centered grid on the unit square, ghost-cell Neumann boundary,
// five-point Laplacian, discrete inner products, norms and quadrature.
#pragma once

#include <cstddef>
#include <vector>

namespace acnc {

// Uniform square mesh of n x n cells on [0,1]^2, spacing h = 1/n.
// Cell centers sit at x_i = (i - 1/2) h for interior indices i = 1..n.
struct Grid {
    int n;
    double h;

    explicit Grid(int n_cells);

    // Cell-center coordinate for index i in 1..n (also valid for the ghost
    // indices 0 and n+1, which lie half a cell outside the domain).
    double x(int i) const { return (i - 0.5) * h; }
};

bool operator==(const Grid& a, const Grid& b);

// Scalar grid function with a one-cell ghost ring.
// Valid indices are (i,j) with i,j in 0..n+1; interior is 1..n.
class Field {
  public:
    explicit Field(const Grid& g) : grid_(g), values_((g.n + 2) * (g.n + 2), 0.0) {}

    const Grid& grid() const { return grid_; }
    int n() const { return grid_.n; }

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * (grid_.n + 2) + j]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * (grid_.n + 2) + j]; }

    void fill(double v) { values_.assign(values_.size(), v); }

  private:
    Grid grid_;
    std::vector<double> values_;
};

// Mirror the interior into the ghost ring: ghost column 0 copies column 1,
// column n+1 copies column n, then the same in j across the full index range
// (which also fills the corners).
void apply_neumann_bc(Field& f);

// Five-point Laplacian on the interior; the output ghost ring is left zero
// and is unspecified until a boundary condition is reapplied.
Field laplacian_h(const Field& f);

// h^2 * sum over interior cells of f*g.
double inner_l2(const Field& f, const Field& g);

// Edge-averaged staggered inner product of discrete gradients,
// [D_x f, D_x g]_x + [D_y f, D_y g]_y. Both fields must have consistent ghosts.
double grad_inner(const Field& f, const Field& g);

// Midpoint-rule quadrature h^2 * sum over interior cells, second order.
double quad(const Field& f);

enum class NormKind { L2, Linf, H1 };

// L2 = sqrt(inner_l2(f,f)); Linf = max interior |f|;
// H1 = sqrt(L2^2 + grad_inner(f,f)), which needs consistent ghosts.
double norm(const Field& f, NormKind kind);

// Interior-wise helpers used throughout the steppers. Ghost rings of results
// are unspecified until a boundary condition is applied.
Field lincomb(double a, const Field& f, double b, const Field& g);  // a*f + b*g
void axpy(Field& y, double a, const Field& x);                      // y += a*x

}  // namespace acnc
