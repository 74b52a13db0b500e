#pragma once

#include "critlog/energy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace critlog {

/// g(t,y) = (t+y)² ln(t+y)² - t² ln t² - 2ty(ln t² + 1), t > 0, y >= 0.
real g_function(real t, real y);

/// f(p,t,y) = (t+y)^p - t^p - y^p - p t^{p-1} y.
real f_function(real p, real t, real y);

/// f₁(m,t,y) = (t+y)^m - t^m - m t^{m-1} y.
real f1_function(real m, real t, real y);

/**
 * Sampling box [C1, C2] x [1e-6, y_max]. The t axis is uniform with both
 * ends included; the y axis is geometric.
 */
struct BoxSpec {
    real C1 = 0.5L;
    real C2 = 2;
    real y_max = 1e3L;
    int t_samples = 200;
    int y_samples = 5000;

    static constexpr real y_min = 1e-6L;

    void validate() const;
    std::size_t points() const { return static_cast<std::size_t>(t_samples) * static_cast<std::size_t>(y_samples); }
    real t_at(int i) const;
    real y_at(int j) const;
};

/// An empirical constant together with the smallest slack it leaves on the
/// box, divided by y² at each point.
struct Certificate {
    std::string lemma;
    BoxSpec box;
    real exponent = 0;  // ε, p or m
    real constant = 0;
    real margin = 0;
    bool holds() const { return margin > 0; }
};

/// Headroom factor applied to every empirical maximum.
inline constexpr real certificate_headroom = 1.1L;

/// g <= y^{2+ε} + A₁y² on the box.
Certificate find_A1(const BoxSpec& box, real eps);

struct FConstants {
    std::optional<Certificate> lower;  // f >= ½pC₁y^{p-1} - A₂y² (p > 3 only)
    Certificate upper;                 // |f| <= ½p²C₂^{p-2}y² + Â₂C₂y^{p-1}
};

/// Constants for the two f-bounds. Requesting the lower bound with p <= 3
/// is a precondition error.
FConstants find_f_constants(real p, const BoxSpec& box, bool with_lower_bound = true);

/// 2y^m + A₃y² >= f₁ >= ½y^m - A₃y² on the box.
Certificate find_A3(real m, const BoxSpec& box);

struct CorollaryVerdict {
    bool holds = false;
    real worst_margin = 0;
    std::string worst_bound;
    real L1 = 0;
    real L2 = 0;
    real B1 = 0;
    real B2 = 0;
    real B3 = 0;
    bool lower_f_bound_checked = false;  // only for 2* > 3, i.e. N <= 5
    std::size_t support_points = 0;      // (node, n) pairs with U_n > 0
    std::size_t trivial_points = 0;      // pairs outside supp U_n, all quantities 0
    std::vector<Certificate> certificates;
};

/**
 * Pointwise check of the composite bounds for g(u₀, tU), f(2*, u₀, tU) and
 * f₁(q, u₀, tU) at every grid node and every supplied bubble/t pair.
 * Constants come from the scalar finders on [L₁, L₂] = [min, max] of u₀ over
 * r <= 2r₀.
 */
CorollaryVerdict check_corollary(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0, real r0,
                                 const std::vector<GridFunction>& bubbles, const std::vector<real>& t_n,
                                 std::optional<real> eps = std::nullopt, BoxSpec resolution = {});

/// Lower bound -e^{-1-c} of s² log s² + c s² over s >= 0.
real xlog_lower_bound(real c);

}  // namespace critlog
