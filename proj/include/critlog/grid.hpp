#pragma once

#include "critlog/types.hpp"

#include <utility>

namespace critlog {

/// Surface area of the unit sphere S^{N-1} in R^N.
real unit_sphere_area(int dimension);

/**
 * Uniform radial discretization of the ball B(0,R) in R^N.
 *
 * Nodes r_i = i*h, i = 0..M. Quadrature weights follow the trapezoid rule on
 * sigma*r^{N-1}dr, except at the origin where the weight is the volume of the
 * ball of radius h/2. The stiffness coefficients sigma*r_{i+1/2}^{N-1}/h give
 * the midpoint-difference Dirichlet form.
 */
class RadialGrid {
public:
    RadialGrid(int dimension, real radius, int node_count);

    int dimension() const { return dimension_; }
    real radius() const { return radius_; }
    int node_count() const { return node_count_; }
    real spacing() const { return spacing_; }
    /// Number of stored unknowns (M); u_M = 0 is implied.
    std::size_t unknowns() const { return static_cast<std::size_t>(node_count_); }

    real node(std::size_t i) const { return nodes_[i]; }
    std::span<const real> nodes() const { return nodes_; }
    /// Weights for i = 0..M (the last one only contributes to the volume).
    std::span<const real> weights() const { return weights_; }
    real weight(std::size_t i) const { return weights_[i]; }
    /// Coefficient of (u_{i+1}-u_i)^2 in the Dirichlet form, i = 0..M-1.
    real stiffness(std::size_t i) const { return stiffness_[i]; }
    std::span<const real> stiffness() const { return stiffness_; }

    real sphere_area() const { return sphere_area_; }
    /// Sum of the quadrature weights.
    real volume() const;
    /// sigma R^N / N.
    real exact_volume() const;

    GridFunction zeros() const { return GridFunction(unknowns()); }

    template <class F>
    GridFunction sample(F&& f) const {
        GridFunction u(unknowns());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(nodes_[i]);
        return u;
    }

private:
    int dimension_;
    real radius_;
    int node_count_;
    real spacing_;
    real sphere_area_;
    std::vector<real> nodes_;
    std::vector<real> weights_;
    std::vector<real> stiffness_;
};

RadialGrid build_grid(int dimension, real radius, int node_count);

/// Discrete -Delta u = W^{-1} K u; symmetric under the weighted inner product.
GridFunction apply_neg_laplacian(const RadialGrid& g, const GridFunction& u);

/// K u (the Dirichlet form's gradient, without the inverse mass).
GridFunction apply_stiffness(const RadialGrid& g, const GridFunction& u);

/// Solves K x = rhs (K is symmetric positive definite tridiagonal).
GridFunction solve_stiffness(const RadialGrid& g, const GridFunction& rhs);

/// sigma * int_0^R u'(r)^2 r^{N-1} dr with midpoint differences.
real h1_seminorm_sq(const RadialGrid& g, const GridFunction& u);

/// sqrt(h1_seminorm_sq); the H^1_0 norm ||u||.
real h1_norm(const RadialGrid& g, const GridFunction& u);

/// Quadrature of int |u|^p over the ball.
real lp_norm_p(const RadialGrid& g, const GridFunction& u, real p);

/// Weighted inner product sum_i w_i u_i v_i.
real weighted_dot(const RadialGrid& g, const GridFunction& u, const GridFunction& v);

/// sqrt(weighted_dot(u, u)).
real weighted_norm(const RadialGrid& g, const GridFunction& u);

struct Eigenpair {
    real eigenvalue;
    GridFunction eigenfunction;  // positive, unit weighted L^2 norm
    int iterations;
};

/// Principal Dirichlet eigenpair of the discrete operator by inverse iteration.
Eigenpair principal_eigenpair(const RadialGrid& g);

/**
 * Best Sobolev constant S of H^1(R^N) -> L^{2*}(R^N), evaluated as the
 * Rayleigh quotient of the Talenti bubble by adaptive quadrature on
 * [0, R_cut] plus a convergent asymptotic series for the tail.
 */
real best_sobolev_constant(int dimension);

/// The same quotient evaluated for the dilated bubble u_{1/n}.
real bubble_sobolev_quotient(int dimension, real scale);

/// int_0^inf s^m (1+s^2)^{-a} ds, with m - 2a < -1.
real radial_moment(real m, real a);

}  // namespace critlog
