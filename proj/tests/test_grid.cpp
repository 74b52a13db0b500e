#include "critlog/grid.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace critlog;
using critlog::test::rel_err;

TEST_CASE("uniform nodes on the unit interval") {
    const RadialGrid g = build_grid(3, 1, 10);
    CHECK(g.spacing() == doctest::Approx(0.1));
    REQUIRE(g.nodes().size() == 11);
    for (std::size_t i = 0; i <= 10; ++i) CHECK(static_cast<double>(g.node(i)) == doctest::Approx(0.1 * i));
    CHECK(g.node(0) == 0);
    CHECK(g.node(10) == 1);
    CHECK(g.unknowns() == 10);
}

TEST_CASE("weights sum to the ball volume") {
    const RadialGrid g = build_grid(3, 1, 200);
    CHECK(rel_err(g.volume(), 4 * pi / 3) < 1e-3L);
    for (real w : g.weights()) CHECK(w > 0);
}

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(build_grid(2, 1, 100), precondition_error);
    CHECK_THROWS_AS(build_grid(3, 1, 7), precondition_error);
    CHECK_THROWS_AS(build_grid(3, 0, 100), precondition_error);
    CHECK_THROWS_AS(build_grid(3, -1, 100), precondition_error);
}

TEST_CASE("volume error is second order") {
    for (int N : {3, 4, 5}) {
        const real e1 = std::fabs(build_grid(N, 1, 100).volume() - build_grid(N, 1, 100).exact_volume());
        const real e2 = std::fabs(build_grid(N, 1, 200).volume() - build_grid(N, 1, 200).exact_volume());
        const real ratio = e1 / e2;
        CHECK(ratio > 3.5L);
        CHECK(ratio < 4.5L);
    }
}

TEST_CASE("-Laplacian of 1 - r^2 is 2N") {
    for (int N : {3, 5}) {
        const RadialGrid g = build_grid(N, 1, 100);
        const GridFunction u = g.sample([](real r) { return 1 - r * r; });
        const GridFunction lap = apply_neg_laplacian(g, u);
        CHECK(lap[0] == doctest::Approx(2.0 * N).epsilon(1e-12));  // origin stencil -2N(u1-u0)/h^2
        // Consistency error is O((h/r)^2): large next to the origin, small away from it.
        for (std::size_t i = 1; i < lap.size(); ++i) CHECK(rel_err(lap[i], 2 * N) * i * i < N * N / 8.0L);
        CHECK(rel_err(lap[50], 2 * N) < 1e-3L);
    }
}

TEST_CASE("origin row uses the symmetric stencil") {
    const RadialGrid g = build_grid(4, 1, 50);
    GridFunction u = g.zeros();
    u[0] = 1.3L;
    u[1] = 0.4L;
    const real h = g.spacing();
    CHECK(rel_err(apply_neg_laplacian(g, u)[0], -2 * 4 * (u[1] - u[0]) / (h * h)) < 1e-15L);
}

TEST_CASE("Dirichlet seminorm and L^p quadrature of 1 - r^2") {
    const RadialGrid g = build_grid(3, 1, 400);
    const GridFunction u = g.sample([](real r) { return 1 - r * r; });
    CHECK(rel_err(h1_seminorm_sq(g, u), 16 * pi / 5) < 1e-3L);
    CHECK(rel_err(lp_norm_p(g, u, 2), 32 * pi / 105) < 1e-3L);
    CHECK(h1_seminorm_sq(g, g.zeros()) == 0);
    CHECK(lp_norm_p(g, g.zeros(), 3.5L) == 0);
}

TEST_CASE("principal eigenvalue against Bessel zeros") {
    const Eigenpair e3 = principal_eigenpair(build_grid(3, 1, 800));
    CHECK(rel_err(e3.eigenvalue, pi * pi) < 1e-3L);
    const Eigenpair e5 = principal_eigenpair(build_grid(5, 1, 800));
    CHECK(rel_err(e5.eigenvalue, 4.493409457909064175307880927276L * 4.493409457909064175307880927276L) < 1e-3L);
}

TEST_CASE("eigenpair scaling, positivity and Rayleigh identity") {
    const RadialGrid g1 = build_grid(3, 1, 200), g2 = build_grid(3, 2, 200);
    const Eigenpair a = principal_eigenpair(g1), b = principal_eigenpair(g2);
    CHECK(rel_err(b.eigenvalue, a.eigenvalue / 4) < 1e-6L);
    CHECK(a.eigenfunction.all_positive());
    CHECK(rel_err(weighted_norm(g1, a.eigenfunction), 1) < 1e-12L);
    CHECK(rel_err(h1_seminorm_sq(g1, a.eigenfunction), a.eigenvalue * lp_norm_p(g1, a.eigenfunction, 2)) < 1e-3L);
    const GridFunction lap = apply_neg_laplacian(g1, a.eigenfunction);
    for (std::size_t i = 0; i < lap.size(); ++i)
        CHECK(std::fabs(lap[i] - a.eigenvalue * a.eigenfunction[i]) < 1e-6L);
}

TEST_CASE("Sobolev constant against the closed form") {
    const real oracle[] = {5.47790408953133187362551230082L, 10.2603986412949127643522908774L,
                           14.8119117200059340001583804469L};
    for (int N : {3, 4, 5}) {
        const real S = best_sobolev_constant(N);
        CHECK(rel_err(S, oracle[N - 3]) < 1e-6L);
        for (real n : {0.5L, 3.0L, 40.0L}) CHECK(rel_err(bubble_sobolev_quotient(N, n), S) < 1e-9L);
    }
}

TEST_CASE("weighted symmetry of -Laplacian") {
    for (int N : {3, 4, 6}) {
        const RadialGrid g = build_grid(N, 1.5L, 300);
        for (int k = 0; k < 10; ++k) {
            GridFunction u = g.zeros(), v = g.zeros();
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = test::uniform(-1, 1), v[i] = test::uniform(-1, 1);
            const real a = weighted_dot(g, apply_neg_laplacian(g, u), v);
            const real b = weighted_dot(g, u, apply_neg_laplacian(g, v));
            CHECK(std::fabs(a - b) <= 1e-10L * std::fabs(a));
        }
    }
}

TEST_CASE("discrete Poincare bound on random vectors") {
    const RadialGrid g = build_grid(4, 1, 200);
    const real lambda1 = principal_eigenpair(g).eigenvalue;
    for (int k = 0; k < 50; ++k) {
        GridFunction u = g.zeros();
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = test::uniform(-1, 1);
        CHECK(h1_seminorm_sq(g, u) >= lambda1 * lp_norm_p(g, u, 2) * (1 - 1e-12L));
    }
}

TEST_CASE("Sobolev bound on resolved radial profiles") {
    for (int N : {3, 4, 5}) {
        const RadialGrid g = build_grid(N, 1, 400);
        const real S = best_sobolev_constant(N);
        const real two_star = 2.0L * N / (N - 2);
        for (int k = 0; k < 30; ++k) {
            const GridFunction u = test::random_profile(g);
            const real q = h1_seminorm_sq(g, u) / std::pow(lp_norm_p(g, u, two_star), 2 / two_star);
            CHECK(q >= 0.95L * S);
        }
        // Bubble-shaped profiles with cores of 8 cells or more.
        for (real width : {0.02L, 0.05L, 0.1L}) {
            const GridFunction u = g.sample([&](real r) {
                return std::pow(1 + r * r / (width * width), -(N - 2) / 2.0L) - std::pow(1 + 1 / (width * width), -(N - 2) / 2.0L);
            });
            const real q = h1_seminorm_sq(g, u) / std::pow(lp_norm_p(g, u, two_star), 2 / two_star);
            CHECK(q >= 0.95L * S);
        }
    }
}

TEST_CASE("a single-node origin spike falls below S (lumped origin cell)") {
    // Known limitation of the scheme: W^{-1}K with the origin stencil fixes
    // w_0 / a_0 = h^2 / (2N), so a one-node spike has quotient
    // sigma^{2/N} N^{(N-2)/N} / 2, independent of h and below S.
    for (int N : {3, 4}) {
        const RadialGrid g = build_grid(N, 1, 400);
        GridFunction u = g.zeros();
        u[0] = 1;
        const real two_star = 2.0L * N / (N - 2);
        const real q = h1_seminorm_sq(g, u) / std::pow(lp_norm_p(g, u, two_star), 2 / two_star);
        const real predicted = std::pow(unit_sphere_area(N), 2.0L / N) * std::pow(N, (N - 2.0L) / N) / 2;
        CHECK(rel_err(q, predicted) < 1e-12L);
        CHECK(q < best_sobolev_constant(N));
    }
}
