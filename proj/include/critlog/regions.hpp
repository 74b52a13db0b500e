#pragma once

#include "critlog/energy.hpp"

#include <optional>
#include <string>

namespace critlog {

enum class ApplicableCase { nu_nonpositive, nu_positive };

std::string to_string(ApplicableCase c);

/// Which lower bound produced (α, ρ).
enum class GeometryCase { none, ground_interval, shifted_log };

std::string to_string(GeometryCase c);

/// The signed expressions whose positivity defines M₁..M₄.
struct RegionValues {
    real m1;  // (μ/N)((λ₁-λ)/(μλ₁))^{N/2} S^{N/2} + (θ/2)|Ω|
    real m2;  // (1/N)μ^{-(N-2)/2} S^{N/2} + (θ/2)e^{-λ/θ}|Ω|
    real m3;  // (1/N)((λ₁-λ)/λ₁)^{N/2}(q/(qμ+2*ν))^{(N-2)/2}S^{N/2} + (θ/2)e^{-2ν/(qθ)}|Ω|
    real m4;  // (1/N)(q/(qμ+2*ν))^{(N-2)/2}S^{N/2} + (θ/2)e^{-2ν/(qθ)-λ/θ}|Ω|
};

RegionValues region_values(const ProblemParams& p, real S, real lambda1, real volume);

struct RegionReport {
    bool in_M1 = false;
    bool in_M2 = false;
    bool in_M3 = false;
    bool in_M4 = false;
    real S = 0;
    real lambda1 = 0;
    real volume = 0;
    std::optional<real> alpha;
    std::optional<real> rho;
    ApplicableCase applicable_case = ApplicableCase::nu_nonpositive;
    GeometryCase geometry_case = GeometryCase::none;

    bool any() const { return in_M1 || in_M2 || in_M3 || in_M4; }
};

/**
 * Literal sign tests of the four region displays. M₁/M₂ are evaluated only for
 * ν <= 0 and M₃/M₄ only for ν > 0; M₁/M₃ additionally need 0 <= λ < λ₁.
 */
RegionReport region_membership(const ProblemParams& p, real S, real lambda1, real volume);

struct GeometryConstants {
    real alpha;
    real rho;
    GeometryCase source;
};

/**
 * Mountain-pass geometry: I_ν(v) >= α whenever ‖v‖ = ρ.
 *
 * For ν > 0 the M₃ (ground interval) or M₄ (shifted log) formulas are used;
 * for ν <= 0 the same formulas at ν = 0, since I_ν >= I_0 there. When both
 * cases apply, the one with the larger ρ wins.
 */
GeometryConstants geometry_constants(const ProblemParams& p, real S, real lambda1, real volume);

/// The radial lower bound ½c s² - (μ/2* + ν/q)S^{-2*/2}s^{2*} + volume term
/// for the given case; α is its value at s = ρ.
real geometry_lower_bound(const ProblemParams& p, real S, real lambda1, real volume, GeometryCase which,
                          real s);

}  // namespace critlog
