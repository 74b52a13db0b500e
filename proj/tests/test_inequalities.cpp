#include "critlog/bubbles.hpp"
#include "critlog/inequalities.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace critlog;
using critlog::test::rel_err;

namespace {

// A coarser box keeps the unit suite fast; the acceptance run uses 10^6 points.
BoxSpec small_box() {
    BoxSpec b;
    b.t_samples = 60;
    b.y_samples = 1500;
    return b;
}

}  // namespace

TEST_CASE("scalar functions at exact points") {
    CHECK(rel_err(g_function(1, 1), 4 * std::log(4.0L) - 2) < 1e-15L);
    CHECK(f_function(4, 1, 1) == doctest::Approx(10).epsilon(1e-15));
    CHECK(f1_function(3, 1, 1) == doctest::Approx(4).epsilon(1e-15));
    // Oracle: mpmath at 30 digits.
    CHECK(rel_err(g_function(0.5L, 3), 32.1981494017761604055709640281L) < 1e-15L);
    CHECK(rel_err(g_function(2, 1e-3L), 4.38662765279488853609618352801e-6L) < 1e-12L);
    CHECK(rel_err(f_function(10.0L / 3, 0.7L, 2.5L), 23.1507909496182361268814657102L) < 1e-14L);
    CHECK(rel_err(f1_function(2.5L, 1.5L, 0.2L), 0.0938643760323638097330314481357L) < 1e-14L);
    for (real t : {0.5L, 1.0L, 2.0L}) {
        CHECK(g_function(t, 0) == 0);
        CHECK(f_function(3.5L, t, 0) == 0);
        CHECK(f1_function(2.5L, t, 0) == 0);
    }
    CHECK_THROWS_AS(g_function(0, 1), precondition_error);
    CHECK_THROWS_AS(f_function(3, 1, -1), precondition_error);
}

TEST_CASE("series and direct branches agree at the switch") {
    for (real t : {0.5L, 1.3L, 2.0L}) {
        const real y0 = 0.05L * t;
        for (real eps : {-1e-9L, 1e-9L}) {
            const real y = y0 * (1 + eps);
            CHECK(rel_err(g_function(t, y), g_function(t, y0)) < 1e-7L);
            CHECK(rel_err(f_function(4, t, y), f_function(4, t, y0)) < 1e-7L);
            CHECK(rel_err(f1_function(2.5L, t, y), f1_function(2.5L, t, y0)) < 1e-7L);
        }
    }
}

TEST_CASE("small-y curvature limits") {
    // g/y^2 -> ln t^2 + 3; at t = C2 = 2 this is 3 + ln 4.
    CHECK(rel_err(g_function(2, 1e-6L) / 1e-12L, 3 + std::log(4.0L)) < 1e-5L);
    // f1/y^2 -> m(m-1)t^{m-2}/2.
    for (real m : {2.5L, 3.0L, 4.0L})
        for (real t : {0.5L, 1.0L, 2.0L})
            CHECK(rel_err(f1_function(m, t, 1e-6L) / 1e-12L, m * (m - 1) / 2 * std::pow(t, m - 2)) < 0.01L);
}

TEST_CASE("box validation") {
    BoxSpec b;
    b.C1 = 0;
    CHECK_THROWS_WITH_AS(b.validate(), doctest::Contains("C1"), precondition_error);
    b = BoxSpec{};
    b.C2 = 0.4L;
    CHECK_THROWS_WITH_AS(b.validate(), doctest::Contains("C2"), precondition_error);
    b = BoxSpec{};
    b.t_samples = 10;
    b.y_samples = 50;
    CHECK_THROWS_AS(b.validate(), precondition_error);
    b = BoxSpec{};
    CHECK(b.points() >= 1000000);
    CHECK(b.y_at(0) == BoxSpec::y_min);
    CHECK(b.y_at(b.y_samples - 1) == b.y_max);
    CHECK(b.t_at(0) == b.C1);
    CHECK(b.t_at(b.t_samples - 1) == b.C2);
}

TEST_CASE("certificates hold with positive margin") {
    const BoxSpec box = small_box();
    const Certificate a1 = find_A1(box, 1);
    CHECK(std::isfinite(a1.constant));
    CHECK(a1.holds());
    CHECK(a1.constant >= 3 + std::log(4.0L));
    CHECK(a1.lemma == "g_upper");

    const FConstants f4 = find_f_constants(4, box);
    REQUIRE(f4.lower);
    CHECK(f4.lower->holds());
    CHECK(f4.upper.holds());
    CHECK(f4.lower->constant >= 0);

    const FConstants f6 = find_f_constants(6, box, false);
    CHECK_FALSE(f6.lower);
    CHECK(f6.upper.holds());

    for (real m : {2.5L, 3.0L}) {
        const Certificate a3 = find_A3(m, box);
        CHECK(a3.holds());
        CHECK(std::isfinite(a3.constant));
    }
}

TEST_CASE("certificate preconditions") {
    const BoxSpec box = small_box();
    CHECK_THROWS_AS(find_A1(box, 0), precondition_error);
    CHECK_THROWS_AS(find_f_constants(3, box, true), precondition_error);
    CHECK_THROWS_AS(find_f_constants(2, box, false), precondition_error);
    CHECK_THROWS_AS(find_A3(2, box), precondition_error);
}

TEST_CASE("scan refinement changes constants by less than 5%") {
    BoxSpec coarse = small_box();
    BoxSpec fine = coarse;
    fine.t_samples *= 2;
    fine.y_samples *= 2;
    CHECK(rel_err(find_A1(fine, 1).constant, find_A1(coarse, 1).constant) < 0.05L);
    CHECK(rel_err(find_f_constants(4, fine).upper.constant, find_f_constants(4, coarse).upper.constant) < 0.05L);
    CHECK(rel_err(find_A3(2.5L, fine).constant, find_A3(2.5L, coarse).constant) < 0.05L);
}

TEST_CASE("enlarging the box never decreases the constant") {
    // Nested grids: the inner t nodes are a subset of the outer ones. The
    // f-bound is left out since its form involves C2 itself.
    BoxSpec outer = small_box();
    outer.t_samples = 61;
    BoxSpec inner = outer;
    inner.C1 = 0.75L;
    inner.C2 = 1.5L;
    inner.t_samples = 31;
    CHECK(find_A1(outer, 1).constant >= find_A1(inner, 1).constant);
    CHECK(find_A3(3, outer).constant >= find_A3(3, inner).constant);
}

TEST_CASE("s^2 log s^2 + C s^2 >= -e^{-1-C} at random samples") {
    for (int k = 0; k < 1000000; ++k) {
        const real s = std::exp(test::uniform(-20, 5));
        const real c = test::uniform(-10, 10);
        const real lhs = safe_xlog(s) + c * s * s;
        CHECK_UNARY(lhs >= xlog_lower_bound(c) * (1 + 1e-15L) - 1e-300L);
        if (lhs < xlog_lower_bound(c) * (1 + 1e-15L)) break;
    }
}

TEST_CASE("corollary bounds on a profile plus bubbles") {
    const ProblemParams p{4, 1, 1, 0, -1, 3, 1};
    const RadialGrid g = build_grid(4, 1, 400);
    const GridFunction u0 = g.sample([](real r) { return 0.8L + 0.5L * (1 - r * r); });
    std::vector<GridFunction> bubbles;
    std::vector<real> t_n;
    for (real n : {16.0L, 32.0L}) {
        bubbles.push_back(truncated_bubble({4, n, 0.25L}, g));
        t_n.push_back(2);
    }
    const CorollaryVerdict v = check_corollary(p, g, u0, 0.25L, bubbles, t_n, std::nullopt, small_box());
    CHECK(v.holds);
    CHECK(v.worst_margin > 0);
    CHECK(v.lower_f_bound_checked);
    CHECK(v.trivial_points > 0);
    CHECK(v.support_points > 0);
    CHECK(v.L1 < v.L2);

    // Smaller multipliers leave more slack.
    std::vector<real> small_t(t_n.size(), 0.1L);
    const CorollaryVerdict w = check_corollary(p, g, u0, 0.25L, bubbles, small_t, std::nullopt, small_box());
    CHECK(w.holds);

    CHECK_THROWS_AS(check_corollary(p, g, g.zeros(), 0.25L, bubbles, t_n), precondition_error);
}
