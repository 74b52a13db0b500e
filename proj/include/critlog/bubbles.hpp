#pragma once

#include "critlog/grid.hpp"

#include <vector>

namespace critlog {

/// A cut-off Talenti bubble U_n: u_{1/n} on [0, r₀], linear taper to 0 on
/// [r₀, 2r₀], zero beyond. The ball B(0, 4r₀) must fit in the domain.
struct BubbleSpec {
    int N = 4;
    real n = 16;
    real r0 = 0.25L;

    void validate() const;
};

/// u_{1/n}(r) = [N(N-2)]^{(N-2)/4} (n / (1 + n²r²))^{(N-2)/2}.
real bubble_value(const BubbleSpec& spec, real r);

/// U_n(r), the piecewise truncation.
real truncated_bubble_value(const BubbleSpec& spec, real r);

/// dU_n/dr (one-sided from the left at the kinks).
real truncated_bubble_derivative(const BubbleSpec& spec, real r);

/// U_n sampled at the grid nodes. Rejects 4r₀ > R.
GridFunction truncated_bubble(const BubbleSpec& spec, const RadialGrid& g);

/// ∫_{R^N} U_n^p by adaptive quadrature of the closed form.
real bubble_norm_p(const BubbleSpec& spec, real p);

/// ∫_{R^N} |∇U_n|² by adaptive quadrature of the closed form.
real bubble_gradient_sq(const BubbleSpec& spec);

struct PowerFit {
    real slope;
    real intercept;
    real residual;  // root-mean-square residual of the log fit
    bool log_corrected;
};

/// Least-squares fit of log(value) (or log(value / ln n)) against log n.
PowerFit fit_power_law(std::span<const real> ns, std::span<const real> values, bool log_corrected);

/// -min{(N-2)p/2, N-(N-2)p/2}, the decay exponent of ‖U_n‖_p^p.
real expected_norm_exponent(int N, real p);

/// True for p = N/(N-2), where the decay picks up a ln n factor.
bool norm_fit_is_log_corrected(int N, real p);

std::vector<real> default_bubble_scales();

/// Slope of log ‖U_n‖_p^p against log n, norms from closed-form quadrature.
PowerFit fit_norm_exponent(int N, real r0, std::span<const real> n_list, real p);

/// Same fit with norms from grid quadrature of the sampled U_n.
PowerFit fit_norm_exponent(const RadialGrid& g, real r0, std::span<const real> n_list, real p);

/// Decay fits of |‖∇U_n‖² - S^{N/2}| and |‖U_n‖_{2*}^{2*} - S^{N/2}|.
struct BubbleAsymptotics {
    PowerFit gradient_gap;
    PowerFit critical_gap;
    std::vector<real> sobolev_quotients;  // ‖∇U_n‖² / ‖U_n‖_{2*}², per n
};

BubbleAsymptotics bubble_asymptotics(int N, real r0, std::span<const real> n_list, real S);

}  // namespace critlog
