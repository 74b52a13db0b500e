#include "critlog/grid.hpp"

#include "tridiagonal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace critlog {

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](real v) { return std::isfinite(v); });
}

bool GridFunction::all_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](real v) { return v > 0; });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(real factor) {
    for (auto& v : values_) v *= factor;
    return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(real factor, GridFunction u) { return u *= factor; }

void axpy(GridFunction& u, real factor, const GridFunction& v) {
    if (u.size() != v.size()) throw precondition_error("axpy: size mismatch");
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += factor * v[i];
}

real unit_sphere_area(int dimension) {
    const real half = static_cast<real>(dimension) / 2;
    return 2 * std::pow(pi, half) / std::tgamma(half);
}

RadialGrid::RadialGrid(int dimension, real radius, int node_count)
    : dimension_(dimension), radius_(radius), node_count_(node_count) {
    if (dimension < 3) throw precondition_error("grid: dimension N must be >= 3");
    if (!(radius > 0) || !std::isfinite(radius)) throw precondition_error("grid: radius R must be positive");
    if (node_count < 8) throw precondition_error("grid: node count M must be >= 8");

    const auto m = static_cast<std::size_t>(node_count);
    spacing_ = radius / node_count;
    sphere_area_ = unit_sphere_area(dimension);
    const real power = dimension - 1;

    nodes_.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) nodes_[i] = static_cast<real>(i) * spacing_;
    nodes_[m] = radius;

    weights_.resize(m + 1);
    weights_[0] = sphere_area_ * std::pow(spacing_ / 2, static_cast<real>(dimension)) / dimension;
    for (std::size_t i = 1; i < m; ++i) weights_[i] = sphere_area_ * std::pow(nodes_[i], power) * spacing_;
    weights_[m] = sphere_area_ * std::pow(radius, power) * spacing_ / 2;

    stiffness_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const real mid = (static_cast<real>(i) + 0.5L) * spacing_;
        stiffness_[i] = sphere_area_ * std::pow(mid, power) / spacing_;
    }
}

real RadialGrid::volume() const { return std::accumulate(weights_.begin(), weights_.end(), real{0}); }

real RadialGrid::exact_volume() const {
    return sphere_area_ * std::pow(radius_, static_cast<real>(dimension_)) / dimension_;
}

RadialGrid build_grid(int dimension, real radius, int node_count) {
    return RadialGrid(dimension, radius, node_count);
}

namespace {

void require_shape(const RadialGrid& g, const GridFunction& u) {
    if (u.size() != g.unknowns())
        throw precondition_error("grid function has " + std::to_string(u.size()) + " values, grid expects " +
                                 std::to_string(g.unknowns()));
}

}  // namespace

GridFunction apply_stiffness(const RadialGrid& g, const GridFunction& u) {
    require_shape(g, u);
    const std::size_t m = u.size();
    GridFunction out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const real next = i + 1 < m ? u[i + 1] : 0;
        const real flux = g.stiffness(i) * (u[i] - next);
        out[i] += flux;
        if (i + 1 < m) out[i + 1] -= flux;
    }
    return out;
}

GridFunction apply_neg_laplacian(const RadialGrid& g, const GridFunction& u) {
    GridFunction out = apply_stiffness(g, u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= g.weight(i);
    return out;
}

GridFunction solve_stiffness(const RadialGrid& g, const GridFunction& rhs) {
    require_shape(g, rhs);
    const std::size_t m = rhs.size();
    std::vector<real> diag(m), off(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        diag[i] = g.stiffness(i) + (i > 0 ? g.stiffness(i - 1) : 0);
        if (i + 1 < m) off[i] = -g.stiffness(i);
    }
    return GridFunction(detail::solve_tridiagonal(diag, off, rhs.values()));
}

real h1_seminorm_sq(const RadialGrid& g, const GridFunction& u) {
    require_shape(g, u);
    real sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const real next = i + 1 < u.size() ? u[i + 1] : 0;
        const real d = u[i] - next;
        sum += g.stiffness(i) * d * d;
    }
    return sum;
}

real h1_norm(const RadialGrid& g, const GridFunction& u) { return std::sqrt(h1_seminorm_sq(g, u)); }

real lp_norm_p(const RadialGrid& g, const GridFunction& u, real p) {
    require_shape(g, u);
    if (!(p >= 1)) throw precondition_error("lp_norm_p: exponent p must be >= 1");
    real sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const real a = std::fabs(u[i]);
        if (a > 0) sum += g.weight(i) * std::pow(a, p);
    }
    return sum;
}

real weighted_dot(const RadialGrid& g, const GridFunction& u, const GridFunction& v) {
    require_shape(g, u);
    require_shape(g, v);
    real sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += g.weight(i) * u[i] * v[i];
    return sum;
}

real weighted_norm(const RadialGrid& g, const GridFunction& u) { return std::sqrt(weighted_dot(g, u, u)); }

Eigenpair principal_eigenpair(const RadialGrid& g) {
    constexpr int max_iterations = 2000;
    const real radius = g.radius();
    GridFunction phi = g.sample([radius](real r) { return 1 - (r / radius) * (r / radius); });
    phi *= 1 / weighted_norm(g, phi);

    real eigenvalue = h1_seminorm_sq(g, phi);
    real previous_residual = std::numeric_limits<real>::infinity();
    for (int it = 1; it <= max_iterations; ++it) {
        GridFunction rhs = phi;
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= g.weight(i);
        GridFunction next = solve_stiffness(g, rhs);
        const real norm = weighted_norm(g, next);
        next *= 1 / norm;
        // Rayleigh quotient of the new iterate.
        const real updated = h1_seminorm_sq(g, next);
        phi = std::move(next);
        eigenvalue = updated;
        // The Rayleigh quotient settles quadratically, so stop on the residual
        // of -Δφ = λφ; rounding sets its floor, hence the stagnation test.
        GridFunction r = apply_neg_laplacian(g, phi);
        axpy(r, -eigenvalue, phi);
        const real residual = weighted_norm(g, r);
        const bool stagnated = residual > 0.5L * previous_residual;
        previous_residual = residual;
        if (residual < 1e-12L * eigenvalue || (stagnated && residual < 1e-8L * eigenvalue)) {
            if (!phi.all_positive())
                throw convergence_error("principal_eigenpair: eigenfunction lost positivity");
            return {eigenvalue, std::move(phi), it};
        }
    }
    throw convergence_error("principal_eigenpair: no convergence within " + std::to_string(max_iterations) +
                            " iterations (ill-conditioned grid?)");
}

real radial_moment(real m, real a) {
    if (!(m - 2 * a < -1)) throw precondition_error("radial_moment: integral diverges (need m - 2a < -1)");
    constexpr real cut = 8;
    auto integrand = [m, a](real s) { return std::pow(s, m) * std::pow(1 + s * s, -a); };
    real error = 0;
    const real core = boost::math::quadrature::gauss_kronrod<real, 31>::integrate(integrand, real{0}, cut, 20,
                                                                                   1e-16L, &error);
    // Tail: s^{m-2a} (1 + s^{-2})^{-a} expanded binomially; ratio cut^{-2}.
    real tail = 0;
    real binom = 1;
    for (int k = 0; k < 200; ++k) {
        const real exponent = m - 2 * a - 2 * k + 1;
        const real term = binom * std::pow(cut, exponent) / (-exponent);
        tail += term;
        if (std::fabs(term) < 1e-30L * std::fabs(core)) break;
        binom *= (-a - k) / (k + 1);
    }
    return core + tail;
}

real bubble_sobolev_quotient(int dimension, real scale) {
    if (dimension < 3) throw precondition_error("sobolev quotient: dimension N must be >= 3");
    if (!(scale > 0)) throw precondition_error("sobolev quotient: scale must be positive");
    const real n_dim = dimension;
    const real amplitude = std::pow(n_dim * (n_dim - 2), (n_dim - 2) / 4);
    const real two_star = 2 * n_dim / (n_dim - 2);
    const real sigma = unit_sphere_area(dimension);
    const real n = scale;
    constexpr real cut = 8;

    // u_{1/n}(r) = n^{(N-2)/2} u(n r); integrate the dilated profile directly
    // on [0, cut/n] and add the tail in the variable s = n r.
    auto grad_sq = [&](real r) {
        const real s = n * r;
        const real du = -amplitude * (n_dim - 2) * std::pow(n, n_dim / 2) * s * std::pow(1 + s * s, -n_dim / 2);
        return du * du * std::pow(r, n_dim - 1);
    };
    auto crit_pow = [&](real r) {
        const real s = n * r;
        const real u = amplitude * std::pow(n, (n_dim - 2) / 2) * std::pow(1 + s * s, -(n_dim - 2) / 2);
        return std::pow(u, two_star) * std::pow(r, n_dim - 1);
    };
    using gk = boost::math::quadrature::gauss_kronrod<real, 31>;
    real err = 0;
    real grad_core = gk::integrate(grad_sq, real{0}, cut / n, 20, 1e-16L, &err);
    real crit_core = gk::integrate(crit_pow, real{0}, cut / n, 20, 1e-16L, &err);

    auto series_tail = [&](real m, real a) {
        real tail = 0;
        real binom = 1;
        for (int k = 0; k < 200; ++k) {
            const real exponent = m - 2 * a - 2 * k + 1;
            const real term = binom * std::pow(cut, exponent) / (-exponent);
            tail += term;
            if (std::fabs(term) < 1e-32L) break;
            binom *= (-a - k) / (k + 1);
        }
        return tail;
    };
    const real grad_tail = amplitude * amplitude * (n_dim - 2) * (n_dim - 2) * series_tail(n_dim + 1, n_dim);
    const real crit_tail = std::pow(amplitude, two_star) * series_tail(n_dim - 1, n_dim);

    const real numerator = sigma * (grad_core + grad_tail);
    const real denominator = sigma * (crit_core + crit_tail);
    return numerator / std::pow(denominator, 2 / two_star);
}

real best_sobolev_constant(int dimension) { return bubble_sobolev_quotient(dimension, 1); }

}  // namespace critlog
