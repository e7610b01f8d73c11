#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "acnc/errors.hpp"
#include "acnc/linsolve.hpp"
#include "testutil.hpp"

using namespace acnc;
using namespace acnc::test;

namespace {

LocalOperator random_operator(const Grid& g, std::mt19937_64& rng, bool with_diag) {
    std::uniform_real_distribution<double> coef(0.5, 3.0);
    LocalOperator A{g, coef(rng), coef(rng), std::nullopt};
    if (with_diag) {
        Field d = random_field(g, rng, 0.0, 2.0);
        A.diag = std::move(d);
    }
    return A;
}

RankOneTerm random_term(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    return {random_field(g, rng), random_field(g, rng), coef(rng)};
}

}  // namespace

TEST_CASE("apply_local basics") {
    Grid g(8);

    SUBCASE("constant maps to alpha * constant") {
        LocalOperator A{g, 2.5, 1.0, std::nullopt};
        Field c(g);
        c.fill(3.0);
        const Field out = apply_local(A, c);
        for (int i = 1; i <= 8; ++i)
            for (int j = 1; j <= 8; ++j) CHECK(out(i, j) == doctest::Approx(7.5).epsilon(1e-14));
    }

    SUBCASE("alpha = 1, beta = 0 is the identity") {
        LocalOperator A{g, 1.0, 0.0, std::nullopt};
        std::mt19937_64 rng(1);
        Field x = random_field(g, rng);
        apply_neumann_bc(x);
        const Field out = apply_local(A, x);
        for (int i = 1; i <= 8; ++i)
            for (int j = 1; j <= 8; ++j) CHECK(out(i, j) == doctest::Approx(x(i, j)).epsilon(1e-15));
    }

    SUBCASE("matches the dense probe matrix on random input") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 5; ++trial) {
            LocalOperator A = random_operator(g, rng, true);
            const auto mat = assemble_dense(A, {});
            Field x = random_field(g, rng);
            const auto xv = flatten(x);
            const Field out = apply_local(A, x);
            const auto ov = flatten(out);
            for (std::size_t row = 0; row < ov.size(); ++row) {
                double expected = 0.0;
                for (std::size_t col = 0; col < xv.size(); ++col) expected += mat[row][col] * xv[col];
                CHECK(ov[row] == doctest::Approx(expected).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("apply_local is self-adjoint and positive") {
    Grid g(8);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        LocalOperator A = random_operator(g, rng, trial % 2 == 0);
        Field x = random_field(g, rng);
        Field y = random_field(g, rng);
        apply_neumann_bc(x);
        apply_neumann_bc(y);
        const double axy = inner_l2(apply_local(A, x), y);
        const double xay = inner_l2(x, apply_local(A, y));
        CHECK(std::abs(axy - xay) <= 1e-12 * std::max(1.0, std::abs(axy)));
        CHECK(inner_l2(apply_local(A, x), x) > 0.0);
    }
}

TEST_CASE("cg_solve") {
    Grid g(8);
    std::mt19937_64 rng(4);

    SUBCASE("recovers a known solution") {
        LocalOperator A = random_operator(g, rng, true);
        Field xstar = random_field(g, rng);
        apply_neumann_bc(xstar);
        const Field b = apply_local(A, xstar);
        const Field x = cg_solve(A, b, 1e-12);
        CHECK(rel_l2_diff(x, xstar) <= 1e-10);
    }

    SUBCASE("zero rhs gives zero") {
        LocalOperator A = random_operator(g, rng, false);
        Field b(g);
        SolveStats stats;
        const Field x = cg_solve(A, b, 1e-10, 0, &stats);
        CHECK(norm(x, NormKind::Linf) == 0.0);
        CHECK(stats.iterations == 0);
    }

    SUBCASE("matches the dense oracle") {
        for (int trial = 0; trial < 10; ++trial) {
            LocalOperator A = random_operator(g, rng, true);
            const Field b = random_field(g, rng);
            const auto dense = dense_solve(assemble_dense(A, {}), flatten(b));
            const Field x = cg_solve(A, b, 1e-13);
            CHECK(rel_l2_diff(x, unflatten(g, dense)) <= 1e-9);
        }
    }

    SUBCASE("residual contract and stats") {
        LocalOperator A = random_operator(g, rng, true);
        const Field b = random_field(g, rng);
        SolveStats stats;
        const double tol = 1e-8;
        const Field x = cg_solve(A, b, tol, 0, &stats);
        Field r = b;
        axpy(r, -1.0, apply_local(A, x));
        CHECK(norm(r, NormKind::L2) <= tol * norm(b, NormKind::L2));
        CHECK(stats.iterations > 0);
        CHECK(stats.residual == doctest::Approx(norm(r, NormKind::L2)).epsilon(1e-12));
    }

    SUBCASE("jacobi preconditioning agrees with plain cg") {
        LocalOperator A = random_operator(g, rng, true);
        const Field b = random_field(g, rng);
        const Field x0 = cg_solve(A, b, 1e-12);
        const Field x1 = cg_solve(A, b, 1e-12, 0, nullptr, true);
        CHECK(rel_l2_diff(x0, x1) <= 1e-9);
    }

    SUBCASE("iteration budget exhaustion throws") {
        LocalOperator A = random_operator(g, rng, true);
        const Field b = random_field(g, rng);
        CHECK_THROWS_AS(cg_solve(A, b, 1e-13, 2), NoConvergence);
    }
}

TEST_CASE("woodbury_solve") {
    Grid g(8);
    std::mt19937_64 rng(6);

    SUBCASE("no terms reduces to cg") {
        LocalOperator A = random_operator(g, rng, true);
        const Field b = random_field(g, rng);
        const Field x0 = cg_solve(A, b, 1e-12);
        const Field x1 = woodbury_solve(A, {}, b, 1e-12);
        CHECK(rel_l2_diff(x0, x1) == 0.0);
    }

    SUBCASE("zero-coefficient term reduces to cg") {
        LocalOperator A = random_operator(g, rng, true);
        const Field b = random_field(g, rng);
        std::vector<RankOneTerm> terms{random_term(g, rng)};
        terms[0].coeff = 0.0;
        const Field x0 = cg_solve(A, b, 1e-12);
        const Field x1 = woodbury_solve(A, terms, b, 1e-12);
        CHECK(rel_l2_diff(x0, x1) <= 1e-11);
    }

    SUBCASE("one and two random terms match the dense oracle") {
        for (std::size_t nterms : {1u, 2u}) {
            for (int trial = 0; trial < 10; ++trial) {
                LocalOperator A = random_operator(g, rng, true);
                std::vector<RankOneTerm> terms;
                for (std::size_t k = 0; k < nterms; ++k) terms.push_back(random_term(g, rng));
                const Field b = random_field(g, rng);
                const auto dense = dense_solve(assemble_dense(A, terms), flatten(b));
                const Field x = woodbury_solve(A, terms, b, 1e-12);
                CHECK(rel_l2_diff(x, unflatten(g, dense)) <= 1e-10);
            }
        }
    }

    SUBCASE("corrected residual within 10 tol ||b||") {
        const double tol = 1e-10;
        for (int trial = 0; trial < 10; ++trial) {
            LocalOperator A = random_operator(g, rng, true);
            std::vector<RankOneTerm> terms{random_term(g, rng), random_term(g, rng)};
            const Field b = random_field(g, rng);
            SolveStats stats;
            const Field x = woodbury_solve(A, terms, b, tol, &stats);
            Field r = b;
            axpy(r, -1.0, corrected_apply(A, terms, x));
            const double res = norm(r, NormKind::L2);
            CHECK(res <= 10.0 * tol * norm(b, NormKind::L2));
            CHECK(stats.residual == doctest::Approx(res).epsilon(1e-10));
        }
    }

    SUBCASE("singular capacitance detected") {
        // alpha = 1, beta = 0: A = I, so y1 = u = 1 and the 1x1 capacitance
        // with c = -1, w = 1 is 1 + c * quad(1 * 1) = 0.
        LocalOperator A{g, 1.0, 0.0, std::nullopt};
        Field ones(g);
        ones.fill(1.0);
        std::vector<RankOneTerm> terms{{ones, ones, -1.0}};
        const Field b = random_field(g, rng);
        CHECK_THROWS_AS(woodbury_solve(A, terms, b, 1e-12), SingularCapacitance);
    }
}
