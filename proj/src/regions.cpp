#include "critlog/regions.hpp"

#include <cmath>
#include <limits>

namespace critlog {

std::string to_string(ApplicableCase c) {
    return c == ApplicableCase::nu_positive ? "nu_positive" : "nu_nonpositive";
}

std::string to_string(GeometryCase c) {
    switch (c) {
        case GeometryCase::ground_interval: return "ground_interval";
        case GeometryCase::shifted_log: return "shifted_log";
        case GeometryCase::none: break;
    }
    return "none";
}

namespace {

// q / (qμ + 2*ν), the effective critical coefficient after absorbing ν|u|^q.
real critical_factor(const ProblemParams& p, real nu) {
    const real denominator = p.q * p.mu + p.two_star() * nu;
    return denominator > 0 ? p.q / denominator : std::numeric_limits<real>::quiet_NaN();
}

real gap_ratio(real lambda, real lambda1) { return (lambda1 - lambda) / lambda1; }

bool in_ground_interval(const ProblemParams& p, real lambda1) { return p.lambda >= 0 && p.lambda < lambda1; }

// Positive when the value is a finite positive number; NaN compares false.
bool positive(real v) { return v > 0; }

}  // namespace

RegionValues region_values(const ProblemParams& p, real S, real lambda1, real volume) {
    const real n = p.N;
    const real sn = std::pow(S, n / 2);
    const real delta = gap_ratio(p.lambda, lambda1);
    const real kappa = critical_factor(p, p.nu);
    const real half_theta = p.theta / 2;

    RegionValues v{};
    v.m1 = p.mu / n * std::pow(delta / p.mu, n / 2) * sn + half_theta * volume;
    v.m2 = 1 / n * std::pow(p.mu, -(n - 2) / 2) * sn + half_theta * std::exp(-p.lambda / p.theta) * volume;
    const real shift = std::exp(-2 * p.nu / (p.q * p.theta));
    v.m3 = 1 / n * std::pow(delta, n / 2) * std::pow(kappa, (n - 2) / 2) * sn + half_theta * shift * volume;
    v.m4 = 1 / n * std::pow(kappa, (n - 2) / 2) * sn +
           half_theta * std::exp(-2 * p.nu / (p.q * p.theta) - p.lambda / p.theta) * volume;
    return v;
}

RegionReport region_membership(const ProblemParams& p, real S, real lambda1, real volume) {
    RegionReport report;
    report.S = S;
    report.lambda1 = lambda1;
    report.volume = volume;
    const RegionValues v = region_values(p, S, lambda1, volume);
    const bool interval = in_ground_interval(p, lambda1);
    if (p.nu <= 0) {
        report.applicable_case = ApplicableCase::nu_nonpositive;
        report.in_M1 = interval && positive(v.m1);
        report.in_M2 = positive(v.m2);
    } else {
        report.applicable_case = ApplicableCase::nu_positive;
        report.in_M3 = interval && positive(v.m3);
        report.in_M4 = positive(v.m4);
    }
    if (report.any()) {
        const GeometryConstants gc = geometry_constants(p, S, lambda1, volume);
        report.alpha = gc.alpha;
        report.rho = gc.rho;
        report.geometry_case = gc.source;
    }
    return report;
}

real geometry_lower_bound(const ProblemParams& p, real S, real lambda1, real volume, GeometryCase which,
                          real s) {
    const real nu = std::max(p.nu, real{0});
    const real two_star = p.two_star();
    real coefficient = 1;
    real log_shift = -2 * nu / (p.q * p.theta);
    if (which == GeometryCase::ground_interval) {
        coefficient = gap_ratio(p.lambda, lambda1);
    } else if (which == GeometryCase::shifted_log) {
        log_shift -= p.lambda / p.theta;
    } else {
        throw precondition_error("geometry_lower_bound: no case selected");
    }
    return coefficient / 2 * s * s - (p.mu / two_star + nu / p.q) * std::pow(S, -two_star / 2) * std::pow(s, two_star) +
           p.theta / 2 * std::exp(log_shift) * volume;
}

GeometryConstants geometry_constants(const ProblemParams& p, real S, real lambda1, real volume) {
    const real n = p.N;
    const real nu = std::max(p.nu, real{0});
    const real kappa = critical_factor(p, nu);
    const real sn = std::pow(S, n / 2);
    const real base_shift = -2 * nu / (p.q * p.theta);

    const RegionValues v = region_values(p, S, lambda1, volume);
    const bool interval = in_ground_interval(p, lambda1);
    const bool ground = interval && positive(p.nu <= 0 ? v.m1 : v.m3);
    const bool shifted = positive(p.nu <= 0 ? v.m2 : v.m4);
    if (!ground && !shifted)
        throw precondition_error("geometry_constants: parameters lie in none of the regions M1-M4");

    // The shifted-log case never has the smaller radius (its factor is 1 >= (λ₁-λ)/λ₁).
    if (shifted) {
        const real rho = std::pow(kappa, (n - 2) / 4) * std::pow(S, n / 4);
        const real alpha = 1 / n * std::pow(kappa, (n - 2) / 2) * sn +
                           p.theta / 2 * std::exp(base_shift - p.lambda / p.theta) * volume;
        return {alpha, rho, GeometryCase::shifted_log};
    }
    const real delta = gap_ratio(p.lambda, lambda1);
    const real rho = std::pow(delta, (n - 2) / 4) * std::pow(kappa, (n - 2) / 4) * std::pow(S, n / 4);
    const real alpha = 1 / n * std::pow(delta, n / 2) * std::pow(kappa, (n - 2) / 2) * sn +
                       p.theta / 2 * std::exp(base_shift) * volume;
    return {alpha, rho, GeometryCase::ground_interval};
}

}  // namespace critlog
