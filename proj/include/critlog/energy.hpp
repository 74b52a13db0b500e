#pragma once

#include "critlog/grid.hpp"

#include <vector>

namespace critlog {

/**
 * Parameters of  -Δu = μ|u|^{2*-2}u + ν|u|^{q-2}u + λu + θ u log u²  on B(0,R).
 *
 * Standing case: μ > 0, θ < 0, 2 < q < 2*, N >= 3.
 */
struct ProblemParams {
    int N = 4;
    real mu = 1;
    real nu = 0;
    real lambda = 0;
    real theta = -0.01L;
    real q = 3;
    real R = 1;

    real two_star() const { return 2 * static_cast<real>(N) / (N - 2); }

    /// Throws precondition_error naming the first offending field.
    void validate() const;
};

/// s² log s² extended by continuity (0 at s = 0). Minimum -1/e at s = e^{-1/2}.
real safe_xlog(real s);

/// s log s² with the continuous extension 0 at s = 0.
real safe_slog(real s);

/// The five integrals making up I_ν, each with its coefficient applied.
struct EnergyTerms {
    real dirichlet;    // ½‖∇u‖²
    real critical;     // -(μ/2*)∫u₊^{2*}
    real subcritical;  // -(ν/q)∫u₊^q
    real linear;       // -(λ/2)∫u₊²
    real logarithmic;  // -(θ/2)∫u₊²(log u₊² - 1)

    real total() const { return dirichlet + critical + subcritical + linear + logarithmic; }
};

EnergyTerms energy_terms(const ProblemParams& p, const RadialGrid& g, const GridFunction& u);

/// I_ν(u) in the λ-separated form.
real energy_value(const ProblemParams& p, const RadialGrid& g, const GridFunction& u);

/// I_ν(u) in the form with λ folded into the logarithmic term,
/// -(θ/2)∫u₊²(log u₊² + λ/θ - 1).
real energy_value_folded(const ProblemParams& p, const RadialGrid& g, const GridFunction& u);

/**
 * Weighted L²-gradient of energy_value, i.e. the Euler–Lagrange residual
 * -Δu - μu₊^{2*-1} - νu₊^{q-1} - λu₊ - θu₊ log u₊².
 */
GridFunction gradient_field(const ProblemParams& p, const RadialGrid& g, const GridFunction& u);

/// Derivative of the nonlinearity f(s) = μs^{2*-1} + νs^{q-1} + λs + θ s log s²
/// at s > 0 (zero for s <= 0); log-term curvature clamped near s = 0.
real nonlinearity_derivative(const ProblemParams& p, real s);

/// Residual norms of a candidate critical point.
struct Residual {
    real absolute;  // weighted L² norm of gradient_field
    real relative;  // absolute / weighted L² norm of -Δu
};

Residual residual_norms(const ProblemParams& p, const RadialGrid& g, const GridFunction& u);

struct FiberSample {
    real t;
    real value;
};

struct FiberProfile {
    std::vector<FiberSample> samples;
    int derivative_sign_changes = 0;
    /// Sample positions of discrete local minima / maxima of g.
    std::vector<real> local_minima;
    std::vector<real> local_maxima;
};

/// Samples g(t) = I_ν(t u) on (0, t_max] and counts sign changes of its
/// finite-difference derivative.
FiberProfile g_profile(const ProblemParams& p, const RadialGrid& g, const GridFunction& u, real t_max,
                       int samples);

}  // namespace critlog
