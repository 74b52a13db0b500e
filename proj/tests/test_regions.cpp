#include "critlog/regions.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace critlog;
using critlog::test::rel_err;

namespace {

// Closed-form inputs: S from the Gamma formula, lambda1 from Bessel zeros.
constexpr real S3 = 5.47790408953133187362551230082L;
constexpr real S4 = 10.2603986412949127643522908774L;
constexpr real lambda1_3 = 9.86960440108935861883449099988L;
constexpr real lambda1_4 = 14.6819706421238932572197777686L;
const real volume3 = 4 * pi / 3;
const real volume4 = pi * pi / 2;

ProblemParams m2_params() { return {4, 1, 0, 0, -0.01L, 3, 1}; }

}  // namespace

TEST_CASE("region displays against an independent evaluation") {
    // Oracle: mpmath evaluation of the four displays, 30 digits.
    const RegionValues a = region_values(m2_params(), S4, lambda1_4, volume4);
    for (real v : {a.m1, a.m2, a.m3, a.m4}) CHECK(rel_err(v, 26.2942710585688995870115564388L) < 1e-15L);

    const RegionValues b = region_values({4, 1, 1, 0, -1, 3, 1}, S4, lambda1_4, volume4);
    CHECK(rel_err(b.m3, 6.47370677102306958578592855165L) < 1e-15L);
    CHECK(rel_err(b.m4, 6.47370677102306958578592855165L) < 1e-15L);

    const RegionValues c = region_values({3, 1, -0.1L, 8, -0.1L, 2.5L, 1}, S3, lambda1_3, volume3);
    CHECK(rel_err(c.m1, 0.142911357943117512952924922279L) < 1e-12L);
    CHECK(c.m2 < 0);
}

TEST_CASE("M2 example membership and geometry constants") {
    const RegionReport r = region_membership(m2_params(), S4, lambda1_4, volume4);
    CHECK(r.in_M2);
    CHECK(r.in_M1);
    CHECK_FALSE(r.in_M3);
    CHECK_FALSE(r.in_M4);
    CHECK(r.applicable_case == ApplicableCase::nu_nonpositive);
    REQUIRE(r.alpha);
    REQUIRE(r.rho);
    // rho = (q/(q mu))^{(N-2)/4} S^{N/4} = S for N = 4, mu = 1.
    CHECK(rel_err(*r.rho, S4) < 1e-15L);
    CHECK(rel_err(*r.alpha, 26.2942710585688995870115564388L) < 1e-15L);
    CHECK(r.geometry_case == GeometryCase::shifted_log);
}

TEST_CASE("interval constraint and dominated volume term") {
    ProblemParams p = m2_params();
    p.lambda = lambda1_4;
    CHECK_FALSE(region_membership(p, S4, lambda1_4, volume4).in_M1);
    p.nu = 1;
    CHECK_FALSE(region_membership(p, S4, lambda1_4, volume4).in_M3);

    for (real nu : {-1.0L, 0.0L, 1.0L}) {
        ProblemParams q = m2_params();
        q.nu = nu;
        q.theta = -1e6L;
        const RegionReport r = region_membership(q, S4, lambda1_4, volume4);
        CHECK_FALSE(r.any());
        CHECK_FALSE(r.alpha);
        CHECK_FALSE(r.rho);
        CHECK_THROWS_AS(geometry_constants(q, S4, lambda1_4, volume4), precondition_error);
    }
}

TEST_CASE("nu > 0 evaluates only M3 and M4") {
    const RegionReport r = region_membership({4, 1, 1, 0, -1, 3, 1}, S4, lambda1_4, volume4);
    CHECK(r.applicable_case == ApplicableCase::nu_positive);
    CHECK_FALSE(r.in_M1);
    CHECK_FALSE(r.in_M2);
    CHECK(r.in_M3);
    CHECK(r.in_M4);
}

TEST_CASE("rho decreases as q mu + 2* nu grows") {
    real previous = 1e30L;
    for (real nu : {0.1L, 0.25L, 0.5L, 0.75L, 1.0L}) {
        const GeometryConstants gc = geometry_constants({4, 1, nu, 0, -1, 3, 1}, S4, lambda1_4, volume4);
        CHECK(gc.rho < previous);
        previous = gc.rho;
    }
}

TEST_CASE("alpha tends to the negative volume term as lambda approaches lambda1") {
    ProblemParams p{4, 1, 0.01L, 0, -0.1L, 3, 1};
    real previous = 1e30L;
    for (real frac : {0.0L, 0.5L, 0.9L, 0.99L}) {
        p.lambda = frac * lambda1_4;
        const RegionValues v = region_values(p, S4, lambda1_4, volume4);
        CHECK(v.m3 < previous);
        previous = v.m3;
    }
    p.lambda = lambda1_4 * (1 - 1e-12L);
    const real limit = p.theta / 2 * std::exp(-2 * p.nu / (p.q * p.theta)) * volume4;
    CHECK(std::fabs(region_values(p, S4, lambda1_4, volume4).m3 - limit) < 1e-6L);
}

TEST_CASE("M3/M4 at nu = 0 coincide with M1/M2") {
    for (real lambda : {0.0L, 2.0L, 7.0L}) {
        for (real theta : {-0.01L, -0.3L, -2.0L}) {
            const RegionValues v = region_values({4, 1.5L, 0, lambda, theta, 3, 1}, S4, lambda1_4, volume4);
            // m1 carries mu^{1 - N/2}, m3 carries (1/mu)^{(N-2)/2}; equal at nu = 0.
            CHECK(std::fabs(v.m3 - v.m1) <= 1e-12L * std::fabs(v.m1));
            CHECK(std::fabs(v.m4 - v.m2) <= 1e-12L * std::fabs(v.m2));
        }
    }
}

TEST_CASE("alpha is the radial lower bound evaluated at rho") {
    const ProblemParams ps[] = {m2_params(), {4, 1, 1, 0, -1, 3, 1}, {3, 1, -0.1L, 8, -0.1L, 2.5L, 1},
                                {4, 2, -0.5L, 3, -0.05L, 2.5L, 1}};
    for (const auto& p : ps) {
        const real S = p.N == 3 ? S3 : S4, l1 = p.N == 3 ? lambda1_3 : lambda1_4;
        const real vol = p.N == 3 ? volume3 : volume4;
        const GeometryConstants gc = geometry_constants(p, S, l1, vol);
        CHECK(gc.alpha > 0);
        CHECK(gc.rho > 0);
        const real recomputed = geometry_lower_bound(p, S, l1, vol, gc.source, gc.rho);
        CHECK(std::fabs(recomputed - gc.alpha) <= 1e-12L * std::fabs(gc.alpha));
        // rho maximizes the radial bound.
        CHECK(geometry_lower_bound(p, S, l1, vol, gc.source, gc.rho * 1.01L) < gc.alpha);
        CHECK(geometry_lower_bound(p, S, l1, vol, gc.source, gc.rho * 0.99L) < gc.alpha);
    }
}

TEST_CASE("energy on the sphere of radius rho stays above alpha") {
    const ProblemParams ps[] = {m2_params(), {4, 1, 1, 0, -1, 3, 1}, {3, 1, -0.1L, 8, -0.1L, 2.5L, 1}};
    for (const auto& p : ps) {
        const RadialGrid g = build_grid(p.N, p.R, 300);
        const real S = best_sobolev_constant(p.N);
        const real l1 = principal_eigenpair(g).eigenvalue;
        const RegionReport r = region_membership(p, S, l1, g.exact_volume());
        REQUIRE(r.any());
        for (int k = 0; k < 50; ++k) {
            GridFunction v = test::random_profile(g);
            v *= *r.rho / h1_norm(g, v);
            CHECK(energy_value(p, g, v) >= *r.alpha - 1e-9L);
        }
    }
}
