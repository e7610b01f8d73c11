#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "acnc/grid.hpp"
#include "testutil.hpp"

using namespace acnc;
using test::random_field;

TEST_CASE("grid geometry") {
    Grid g(4);
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(g.h * g.n - 1.0) <= 2.3e-16);
    CHECK(g.x(1) == doctest::Approx(0.125));
    CHECK(g.x(4) == doctest::Approx(0.875));
    CHECK_THROWS_AS(Grid(1), std::invalid_argument);
}

TEST_CASE("neumann bc mirrors the interior") {
    Grid g(4);

    SUBCASE("constant field") {
        Field f(g);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) f(i, j) = 3.5;
        apply_neumann_bc(f);
        for (int k = 0; k <= 5; ++k) {
            CHECK(f(0, k) == 3.5);
            CHECK(f(5, k) == 3.5);
            CHECK(f(k, 0) == 3.5);
            CHECK(f(k, 5) == 3.5);
        }
    }

    SUBCASE("f(i,j) = i mirrors columns") {
        Field f(g);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) f(i, j) = i;
        apply_neumann_bc(f);
        for (int j = 1; j <= 4; ++j) {
            CHECK(f(0, j) == 1.0);
            CHECK(f(5, j) == 4.0);
        }
    }

    SUBCASE("idempotent") {
        std::mt19937_64 rng(7);
        Field f = random_field(g, rng);
        apply_neumann_bc(f);
        Field once = f;
        apply_neumann_bc(f);
        for (int i = 0; i <= 5; ++i)
            for (int j = 0; j <= 5; ++j) CHECK(f(i, j) == once(i, j));
    }
}

TEST_CASE("five-point laplacian") {
    SUBCASE("constant annihilated") {
        Grid g(8);
        Field f(g);
        f.fill(2.0);
        const Field lap = laplacian_h(f);
        for (int i = 1; i <= 8; ++i)
            for (int j = 1; j <= 8; ++j) CHECK(lap(i, j) == 0.0);
    }

    SUBCASE("unit spike stencil") {
        Grid g(8);
        Field f(g);
        f(4, 5) = 1.0;
        apply_neumann_bc(f);
        const Field lap = laplacian_h(f);
        const double inv_h2 = 64.0;
        CHECK(lap(4, 5) == doctest::Approx(-4.0 * inv_h2));
        CHECK(lap(3, 5) == doctest::Approx(inv_h2));
        CHECK(lap(5, 5) == doctest::Approx(inv_h2));
        CHECK(lap(4, 4) == doctest::Approx(inv_h2));
        CHECK(lap(4, 6) == doctest::Approx(inv_h2));
        CHECK(lap(2, 5) == 0.0);
    }

    SUBCASE("linear function exact away from boundary") {
        Grid g(8);
        Field f(g);
        for (int i = 0; i <= 9; ++i)
            for (int j = 0; j <= 9; ++j) f(i, j) = g.x(i) + g.x(j);
        const Field lap = laplacian_h(f);
        for (int i = 3; i <= 6; ++i)
            for (int j = 3; j <= 6; ++j) CHECK(std::abs(lap(i, j)) < 1e-12);
    }
}

TEST_CASE("discrete inner products and quadrature") {
    SUBCASE("constants on the unit square") {
        Grid g(16);
        Field one(g);
        one.fill(1.0);
        CHECK(inner_l2(one, one) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(quad(one) == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("inner_l2 against a plain double-loop sum") {
        Grid g(8);
        std::mt19937_64 rng(11);
        const Field f = random_field(g, rng);
        const Field x = random_field(g, rng);
        double expected = 0.0;
        for (int i = 1; i <= 8; ++i)
            for (int j = 1; j <= 8; ++j) expected += f(i, j) * x(i, j);
        expected *= g.h * g.h;
        CHECK(inner_l2(f, x) == doctest::Approx(expected).epsilon(1e-14));

        Field one(g);
        one.fill(1.0);
        CHECK(inner_l2(one, x) == doctest::Approx(quad(x)).epsilon(1e-14));
    }

    SUBCASE("quad exact for linear integrand") {
        for (int n : {4, 7, 32}) {
            Grid g(n);
            Field f(g);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) f(i, j) = g.x(i);
            CHECK(quad(f) == doctest::Approx(0.5).epsilon(1e-14));
        }
    }

    SUBCASE("quad of the zero-mean cosine product") {
        Grid g(64);
        Field f(g);
        constexpr double four_pi = 4.0 * std::numbers::pi;
        for (int i = 1; i <= 64; ++i)
            for (int j = 1; j <= 64; ++j)
                f(i, j) = std::cos(four_pi * g.x(i)) * std::cos(four_pi * g.x(j));
        CHECK(std::abs(quad(f)) <= 1e-12);
    }
}

TEST_CASE("grad_inner") {
    Grid g(8);
    std::mt19937_64 rng(3);

    SUBCASE("constant has zero gradient") {
        Field c(g);
        c.fill(4.0);
        apply_neumann_bc(c);
        Field x = random_field(g, rng);
        apply_neumann_bc(x);
        CHECK(grad_inner(c, x) == 0.0);
    }

    SUBCASE("positive semidefinite, zero only for constants") {
        Field f = random_field(g, rng);
        apply_neumann_bc(f);
        CHECK(grad_inner(f, f) > 0.0);
        Field c(g);
        c.fill(-2.0);
        apply_neumann_bc(c);
        CHECK(grad_inner(c, c) == 0.0);
    }
}

TEST_CASE("operator identities on random bc-consistent fields") {
    for (int n : {5, 8, 16}) {
        Grid g(n);
        std::mt19937_64 rng(100 + n);
        for (int trial = 0; trial < 20; ++trial) {
            Field f = random_field(g, rng);
            Field x = random_field(g, rng);
            apply_neumann_bc(f);
            apply_neumann_bc(x);

            // summation by parts
            const double lhs = -inner_l2(laplacian_h(f), x);
            const double rhs = grad_inner(f, x);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));

            // discrete divergence theorem
            CHECK(std::abs(quad(laplacian_h(f))) <= 1e-11);

            // laplacian symmetric
            const double a = inner_l2(laplacian_h(f), x);
            const double b = inner_l2(f, laplacian_h(x));
            CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1.0));

            // quad linear
            const double alpha = 1.7, beta = -0.3;
            CHECK(quad(lincomb(alpha, f, beta, x)) ==
                  doctest::Approx(alpha * quad(f) + beta * quad(x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("ghost corners never enter stencil or reductions") {
    Grid g(6);
    std::mt19937_64 rng(42);
    Field f = random_field(g, rng);
    apply_neumann_bc(f);
    Field poisoned = f;
    poisoned(0, 0) = 1e30;
    poisoned(0, 7) = -1e30;
    poisoned(7, 0) = 1e30;
    poisoned(7, 7) = -1e30;

    const Field la = laplacian_h(f);
    const Field lb = laplacian_h(poisoned);
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) CHECK(la(i, j) == lb(i, j));
    CHECK(quad(f) == quad(poisoned));
    CHECK(grad_inner(f, f) == grad_inner(poisoned, poisoned));
}

TEST_CASE("norms") {
    Grid g(4);

    SUBCASE("unit field") {
        Field one(g);
        one.fill(1.0);
        apply_neumann_bc(one);
        CHECK(norm(one, NormKind::L2) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(norm(one, NormKind::Linf) == 1.0);
        CHECK(norm(one, NormKind::H1) == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("zero field") {
        Field z(g);
        CHECK(norm(z, NormKind::L2) == 0.0);
        CHECK(norm(z, NormKind::Linf) == 0.0);
        CHECK(norm(z, NormKind::H1) == 0.0);
    }

    SUBCASE("unit spike has L2 = h") {
        Field f(g);
        f(2, 3) = 1.0;
        CHECK(norm(f, NormKind::L2) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(norm(f, NormKind::Linf) == 1.0);
    }
}
