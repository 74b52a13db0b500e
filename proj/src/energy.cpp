#include "critlog/energy.hpp"

#include <cmath>

namespace critlog {

namespace {

// Below this amplitude s log s² is indistinguishable from its limit 0 in
// long double arithmetic.
constexpr real log_floor = 1e-4900L;

void require_consistent(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    if (p.N != g.dimension()) throw precondition_error("energy: params N differs from grid dimension");
    if (std::fabs(p.R - g.radius()) > 1e-12L * g.radius())
        throw precondition_error("energy: params R differs from grid radius");
    if (u.size() != g.unknowns()) throw precondition_error("energy: grid function does not match grid");
}

}  // namespace

void ProblemParams::validate() const {
    if (N < 3) throw precondition_error("N: dimension must be >= 3");
    if (!(mu > 0) || !std::isfinite(mu)) throw precondition_error("mu: must be positive");
    if (!std::isfinite(nu)) throw precondition_error("nu: must be finite");
    if (!std::isfinite(lambda)) throw precondition_error("lambda: must be finite");
    if (!(theta < 0) || !std::isfinite(theta)) throw precondition_error("theta: must be negative");
    if (!(q > 2 && q < two_star())) throw precondition_error("q: must lie in (2, 2*) with 2* = 2N/(N-2)");
    if (!(R > 0) || !std::isfinite(R)) throw precondition_error("R: must be positive");
}

real safe_xlog(real s) {
    if (s < 0) throw precondition_error("safe_xlog: argument must be nonnegative");
    if (s < log_floor) return 0;
    const real s2 = s * s;
    return s2 * std::log(s2);
}

real safe_slog(real s) {
    if (s < log_floor) return 0;
    return 2 * s * std::log(s);
}

EnergyTerms energy_terms(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    require_consistent(p, g, u);
    const real two_star = p.two_star();
    real grad = h1_seminorm_sq(g, u);
    real crit = 0, sub = 0, quad = 0, logs = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const real s = u[i];
        if (s <= 0) continue;
        const real w = g.weight(i);
        crit += w * std::pow(s, two_star);
        sub += w * std::pow(s, p.q);
        quad += w * s * s;
        logs += w * (safe_xlog(s) - s * s);
    }
    return {grad / 2, -p.mu / two_star * crit, -p.nu / p.q * sub, -p.lambda / 2 * quad, -p.theta / 2 * logs};
}

real energy_value(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    return energy_terms(p, g, u).total();
}

real energy_value_folded(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    require_consistent(p, g, u);
    const real two_star = p.two_star();
    const real shift = p.lambda / p.theta - 1;
    real value = h1_seminorm_sq(g, u) / 2;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const real s = u[i];
        if (s <= 0) continue;
        const real w = g.weight(i);
        value -= w * (p.mu / two_star * std::pow(s, two_star) + p.nu / p.q * std::pow(s, p.q) +
                      p.theta / 2 * (safe_xlog(s) + shift * s * s));
    }
    return value;
}

GridFunction gradient_field(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    require_consistent(p, g, u);
    const real two_star = p.two_star();
    GridFunction out = apply_neg_laplacian(g, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const real s = u[i];
        if (s <= 0) continue;
        out[i] -= p.mu * std::pow(s, two_star - 1) + p.nu * std::pow(s, p.q - 1) + p.lambda * s +
                  p.theta * safe_slog(s);
    }
    return out;
}

real nonlinearity_derivative(const ProblemParams& p, real s) {
    if (s <= 0) return 0;
    const real two_star = p.two_star();
    // d²/ds² of s² log s² is 2 log s² + 6; keep it above -1e6.
    const real log_curvature = std::max(2 * std::log(s * s) + 6, real{-1e6L});
    return p.mu * (two_star - 1) * std::pow(s, two_star - 2) + p.nu * (p.q - 1) * std::pow(s, p.q - 2) +
           p.lambda + p.theta * (log_curvature - 2) / 2;
}

Residual residual_norms(const ProblemParams& p, const RadialGrid& g, const GridFunction& u) {
    const real absolute = weighted_norm(g, gradient_field(p, g, u));
    const real scale = weighted_norm(g, apply_neg_laplacian(g, u));
    return {absolute, scale > 0 ? absolute / scale : absolute};
}

FiberProfile g_profile(const ProblemParams& p, const RadialGrid& g, const GridFunction& u, real t_max,
                       int samples) {
    if (!(t_max > 1)) throw precondition_error("g_profile: t_max must exceed 1");
    if (samples < 64) throw precondition_error("g_profile: need at least 64 samples");
    if (!u.all_positive()) throw precondition_error("g_profile: profile must be positive");

    FiberProfile profile;
    profile.samples.reserve(static_cast<std::size_t>(samples));
    for (int k = 1; k <= samples; ++k) {
        const real t = t_max * k / samples;
        profile.samples.push_back({t, energy_value(p, g, t * u)});
    }
    int previous_sign = 0;
    for (std::size_t k = 0; k + 1 < profile.samples.size(); ++k) {
        const real d = profile.samples[k + 1].value - profile.samples[k].value;
        const int sign = (d > 0) - (d < 0);
        if (sign == 0) continue;
        if (previous_sign != 0 && sign != previous_sign) {
            (sign > 0 ? profile.local_minima : profile.local_maxima).push_back(profile.samples[k].t);
            ++profile.derivative_sign_changes;
        }
        previous_sign = sign;
    }
    return profile;
}

}  // namespace critlog
