#include "critlog/bubbles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <future>
#include <limits>

namespace critlog {

namespace {

using gk = boost::math::quadrature::gauss_kronrod<real, 31>;

constexpr unsigned gk_depth = 15;
constexpr real gk_tolerance = 1e-17L;

real amplitude(int N) { return std::pow(static_cast<real>(N) * (N - 2), static_cast<real>(N - 2) / 4); }

template <class F>
real integrate(F f, real a, real b) {
    return gk::integrate(f, a, b, gk_depth, gk_tolerance);
}

// ∫_a^b over panels [a, 1], [1, 2], [2, 4], ... so the quadrature sees the
// algebraic decay at every scale.
template <class F>
real integrate_geometric(F f, real a, real b) {
    real total = 0;
    real lo = a;
    real hi = std::max(a, real{1});
    while (lo < b) {
        hi = std::min(hi, b);
        if (hi > lo) total += integrate(f, lo, hi);
        lo = hi;
        hi = 2 * hi;
    }
    return total;
}

// Profile pieces in the scaled variable s = n r. With A = [N(N-2)]^{(N-2)/4}:
//   u_{1/n}(r)   = A n^{(N-2)/2} (1+s²)^{-(N-2)/2}
//   u_{1/n}'(r)  = -A (N-2) n^{N/2} s (1+s²)^{-N/2}
struct Profile {
    int N;
    real n;
    real r0;
    real A;
    real sigma;

    explicit Profile(const BubbleSpec& spec)
        : N(spec.N), n(spec.n), r0(spec.r0), A(amplitude(spec.N)), sigma(unit_sphere_area(spec.N)) {}

    real half() const { return static_cast<real>(N - 2) / 2; }
    real value(real r) const { return A * std::pow(n, half()) * std::pow(1 + n * n * r * r, -half()); }
    real slope(real r) const {
        const real s = n * r;
        return -A * (N - 2) * std::pow(n, static_cast<real>(N) / 2) * s * std::pow(1 + s * s, -static_cast<real>(N) / 2);
    }
    real taper(real r) const { return (2 * r0 - r) / r0; }
    real jacobian(real r) const { return sigma * std::pow(r, N - 1); }

    // ∫ over |x| < r0 of u_{1/n}^p, in s.
    real core_p(real p) const {
        const real scale = std::pow(A, p) * std::pow(n, p * half() - N);
        auto f = [&](real s) { return std::pow(s, N - 1) * std::pow(1 + s * s, -p * half()); };
        return sigma * scale * integrate_geometric(f, 0, n * r0);
    }
    // ∫ over |x| > r0 of u_{1/n}^p, in s (finite when p > N/(N-2)).
    real tail_p(real p) const {
        const real scale = std::pow(A, p) * std::pow(n, p * half() - N);
        auto f = [&](real s) { return std::pow(s, N - 1) * std::pow(1 + s * s, -p * half()); };
        return sigma * scale * gk::integrate(f, n * r0, std::numeric_limits<real>::infinity(), gk_depth, gk_tolerance);
    }
    real taper_p(real p) const {
        auto f = [&](real r) { return std::pow(taper(r) * value(r), p) * jacobian(r); };
        return integrate(f, r0, 2 * r0);
    }

    real core_grad() const {
        const real scale = A * A * (N - 2) * (N - 2);
        auto f = [&](real s) { return std::pow(s, N + 1) * std::pow(1 + s * s, -static_cast<real>(N)); };
        return sigma * scale * integrate_geometric(f, 0, n * r0);
    }
    real tail_grad() const {
        const real scale = A * A * (N - 2) * (N - 2);
        auto f = [&](real s) { return std::pow(s, N + 1) * std::pow(1 + s * s, -static_cast<real>(N)); };
        return sigma * scale * gk::integrate(f, n * r0, std::numeric_limits<real>::infinity(), gk_depth, gk_tolerance);
    }
    real taper_grad() const {
        auto f = [&](real r) {
            const real d = -value(r) / r0 + taper(r) * slope(r);
            return d * d * jacobian(r);
        };
        return integrate(f, r0, 2 * r0);
    }
};

void require_scales(std::span<const real> n_list) {
    if (n_list.size() < 5) throw precondition_error("bubbles: n_list needs at least 5 scales");
    for (real n : n_list)
        if (!(n >= 1)) throw precondition_error("bubbles: scales must be >= 1");
    const real ratio = n_list[1] / n_list[0];
    if (!(ratio > 1)) throw precondition_error("bubbles: n_list must be increasing");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (std::fabs(n_list[k] / n_list[k - 1] - ratio) > 1e-9L * ratio)
            throw precondition_error("bubbles: n_list must be geometric");
}

void require_exponent(int N, real p) {
    const real two_star = 2 * static_cast<real>(N) / (N - 2);
    if (!(p >= 1 && p < two_star)) throw precondition_error("bubbles: p must lie in [1, 2*)");
}

template <class F>
std::vector<real> map_parallel(std::span<const real> ns, F f) {
    std::vector<std::future<real>> jobs;
    jobs.reserve(ns.size());
    for (real n : ns) jobs.push_back(std::async(std::launch::async, f, n));
    std::vector<real> out;
    out.reserve(ns.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace

void BubbleSpec::validate() const {
    if (N < 3) throw precondition_error("BubbleSpec: N must be >= 3");
    if (!(n >= 1) || !std::isfinite(n)) throw precondition_error("BubbleSpec: n must be >= 1");
    if (!(r0 > 0) || !std::isfinite(r0)) throw precondition_error("BubbleSpec: r0 must be positive");
}

real bubble_value(const BubbleSpec& spec, real r) {
    spec.validate();
    if (r < 0) throw precondition_error("bubble_value: r must be nonnegative");
    return Profile(spec).value(r);
}

real truncated_bubble_value(const BubbleSpec& spec, real r) {
    spec.validate();
    if (r < 0) throw precondition_error("truncated_bubble_value: r must be nonnegative");
    const Profile prof(spec);
    if (r <= spec.r0) return prof.value(r);
    if (r < 2 * spec.r0) return prof.taper(r) * prof.value(r);
    return 0;
}

real truncated_bubble_derivative(const BubbleSpec& spec, real r) {
    spec.validate();
    const Profile prof(spec);
    if (r <= spec.r0) return prof.slope(r);
    if (r <= 2 * spec.r0) return -prof.value(r) / spec.r0 + prof.taper(r) * prof.slope(r);
    return 0;
}

GridFunction truncated_bubble(const BubbleSpec& spec, const RadialGrid& g) {
    spec.validate();
    if (spec.N != g.dimension()) throw precondition_error("truncated_bubble: dimension differs from grid");
    if (4 * spec.r0 > g.radius() * (1 + 1e-15L))
        throw precondition_error("truncated_bubble: need 4 r0 <= R so that B(0, 4 r0) lies in the ball");
    return g.sample([&](real r) { return truncated_bubble_value(spec, r); });
}

real bubble_norm_p(const BubbleSpec& spec, real p) {
    spec.validate();
    if (!(p > 0)) throw precondition_error("bubble_norm_p: p must be positive");
    const Profile prof(spec);
    return prof.core_p(p) + prof.taper_p(p);
}

real bubble_gradient_sq(const BubbleSpec& spec) {
    spec.validate();
    const Profile prof(spec);
    return prof.core_grad() + prof.taper_grad();
}

PowerFit fit_power_law(std::span<const real> ns, std::span<const real> values, bool log_corrected) {
    if (ns.size() != values.size()) throw precondition_error("fit_power_law: size mismatch");
    if (ns.size() < 3) throw precondition_error("fit_power_law: need at least 3 points");
    const std::size_t k = ns.size();
    std::vector<real> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(ns[i] > 1) || !(values[i] > 0))
            throw precondition_error("fit_power_law: need n > 1 and positive values");
        x[i] = std::log(ns[i]);
        y[i] = std::log(values[i]);
        if (log_corrected) y[i] -= std::log(x[i]);
    }
    real mx = 0, my = 0;
    for (std::size_t i = 0; i < k; ++i) mx += x[i], my += y[i];
    mx /= k;
    my /= k;
    real sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) throw precondition_error("fit_power_law: degenerate fit (zero variance in log n)");
    PowerFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    real ss = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const real e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / k);
    fit.log_corrected = log_corrected;
    return fit;
}

real expected_norm_exponent(int N, real p) {
    const real a = (N - 2) * p / 2;
    return -std::min(a, N - a);
}

bool norm_fit_is_log_corrected(int N, real p) {
    return std::fabs(p - static_cast<real>(N) / (N - 2)) < 1e-12L;
}

std::vector<real> default_bubble_scales() { return {128, 256, 512, 1024, 2048}; }

PowerFit fit_norm_exponent(int N, real r0, std::span<const real> n_list, real p) {
    require_scales(n_list);
    require_exponent(N, p);
    const auto values = map_parallel(n_list, [=](real n) { return bubble_norm_p({N, n, r0}, p); });
    return fit_power_law(n_list, values, norm_fit_is_log_corrected(N, p));
}

PowerFit fit_norm_exponent(const RadialGrid& g, real r0, std::span<const real> n_list, real p) {
    require_scales(n_list);
    require_exponent(g.dimension(), p);
    const int N = g.dimension();
    const auto values =
        map_parallel(n_list, [&g, N, r0, p](real n) { return lp_norm_p(g, truncated_bubble({N, n, r0}, g), p); });
    return fit_power_law(n_list, values, norm_fit_is_log_corrected(N, p));
}

BubbleAsymptotics bubble_asymptotics(int N, real r0, std::span<const real> n_list, real S) {
    require_scales(n_list);
    const real two_star = 2 * static_cast<real>(N) / (N - 2);
    // S^{N/2} = ‖∇ũ‖² = ‖ũ‖_{2*}^{2*}, so each gap is (taper part) - (tail beyond r0);
    // evaluating it that way avoids cancelling against S^{N/2}.
    std::vector<real> grad_gap(n_list.size()), crit_gap(n_list.size());
    BubbleAsymptotics out;
    out.sobolev_quotients.resize(n_list.size());
    const real sn = std::pow(S, static_cast<real>(N) / 2);
    std::vector<std::future<void>> jobs;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        jobs.push_back(std::async(std::launch::async, [&, k] {
            const Profile prof(BubbleSpec{N, n_list[k], r0});
            grad_gap[k] = std::fabs(prof.taper_grad() - prof.tail_grad());
            crit_gap[k] = std::fabs(prof.taper_p(two_star) - prof.tail_p(two_star));
            const real grad = sn + prof.taper_grad() - prof.tail_grad();
            const real crit = sn + prof.taper_p(two_star) - prof.tail_p(two_star);
            out.sobolev_quotients[k] = grad / std::pow(crit, 2 / two_star);
        }));
    }
    for (auto& j : jobs) j.get();
    out.gradient_gap = fit_power_law(n_list, grad_gap, false);
    out.critical_gap = fit_power_law(n_list, crit_gap, false);
    return out;
}

}  // namespace critlog
