#pragma once

#include "critlog/bubbles.hpp"
#include "critlog/energy.hpp"
#include "critlog/regions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace critlog {

struct SolverOptions {
    int grid_nodes = 400;
    real bubble_n = 16;
    std::optional<real> r0;  // defaults to R/4
    int path_nodes = 32;

    real ball_margin = 1e-3L;           // constraint radius is ρ(1 - ball_margin)
    real residual_tolerance = 1e-8L;    // absolute, weighted L² norm of the gradient
    real relative_tolerance = 1e-10L;   // residual / ‖-Δu‖, needed when u is tiny
    real newton_tolerance = 1e-10L;
    int newton_max_iterations = 50;
    int descent_max_iterations = 5000;
    real mountain_pass_tolerance = 1e-6L;
    int mountain_pass_max_iterations = 4000;
    int fiber_samples = 400;
    real fiber_t_max = 2;

    real ball_radius_factor() const { return 1 - ball_margin; }
    void validate() const;
};

struct MinimizerResult {
    GridFunction u;
    real energy = 0;
    real t0 = 0;  // initial multiple of φ₁
    int iterations = 0;
    int newton_iterations = 0;
    Residual residual{};
    bool projection_active = false;
};

/**
 * Minimizes I_ν over {‖u‖ <= ρ(1 - margin)}: a downward scan of t until
 * I_ν(tφ₁) < 0, a golden-section polish of t, then projected backtracking
 * descent along the H¹₀ gradient. Throws convergence_error when no negative
 * energy is found.
 */
MinimizerResult find_ball_minimizer(const ProblemParams& p, const RadialGrid& g, real rho,
                                    const SolverOptions& opt = {});

struct NewtonResult {
    GridFunction u;
    int iterations = 0;
    bool converged = false;
    real last_step = 0;  // weighted norm of the last accepted step
    Residual residual{};
};

/// Damped Newton on the discrete Euler–Lagrange system, starting from a
/// near-critical u (residual < 1e-3 absolute or relative).
NewtonResult newton_refine(const ProblemParams& p, const RadialGrid& g, const GridFunction& u,
                           const SolverOptions& opt = {});

struct Endpoint {
    real T = 0;
    real T_min = 0;  // 4ρ/S^{N/4}
    GridFunction bubble;
    GridFunction endpoint;
    real energy = 0;
    int doublings = 0;
};

/// Smallest T = T_min(1 + 1e-6)2^k with I_ν(u₀ + TU_n) < I_ν(u₀).
Endpoint select_endpoint(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0, real rho, real S,
                         const BubbleSpec& spec);

/// Energies of u₀ + tU on t = T k / samples, k = 0..samples.
std::vector<FiberSample> ray_profile(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0,
                                     const GridFunction& bubble, real T, int samples);

struct PathState {
    std::vector<GridFunction> nodes;
    std::vector<real> energies;
    std::vector<real> parameters;  // normalized arc length in [0, 1]
    std::size_t max_index = 0;

    real max_energy() const { return energies[max_index]; }
};

struct MountainPassResult {
    GridFunction u;
    real energy = 0;
    PathState path;
    real initial_path_max = 0;
    int iterations = 0;
    bool stalled = false;
    real max_node_gradient = 0;
    NewtonResult newton;
    /// Radius containing half of ∫|∇u|², divided by the grid spacing.
    real concentration_width = 0;
};

/**
 * Mountain pass over rays u₀ + t w. The top of the current ray takes an Armijo
 * step along the H¹₀ gradient with the w-component removed; the step is kept
 * only if the maximum over the new ray through it is lower. Every 25 steps a
 * Newton probe from the top node is tried and accepted when it converges
 * nearby below the path maximum. Ends with newton_refine.
 */
MountainPassResult mountain_pass(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0,
                                 const GridFunction& endpoint, real rho, const SolverOptions& opt = {});

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct TwoLevelVerdict {
    std::vector<Assertion> assertions;
    FiberProfile fiber;
    bool passed() const;
};

/**
 * (i) I(u₀) < 0 < I(u_mp); (ii) I(u₀) is the least energy among the computed
 * critical points; (iii) the fiber map of u₀ has at most two turning points
 * and a minimum at t = 1; (iv) ‖u₀‖ < ρ and I(tu₀) < 0 on (0, 1].
 */
TwoLevelVerdict verify_two_level_structure(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0,
                                           const GridFunction& u_mp, real rho, const SolverOptions& opt = {});

struct SolveReport {
    ProblemParams params;
    SolverOptions options;
    RegionReport regions;
    real alpha = 0;
    real rho = 0;
    real S = 0;
    real lambda1 = 0;

    GridFunction u0;
    real c_rho = 0;
    Residual residual0{};
    real norm_u0 = 0;
    int descent_iterations = 0;
    int newton_iterations0 = 0;

    real T = 0;
    real T_min = 0;
    GridFunction u_mp;
    real c_M = 0;
    Residual residual_mp{};
    real initial_path_max = 0;
    int mountain_pass_iterations = 0;
    int newton_iterations_mp = 0;
    bool stalled = false;
    real concentration_width = 0;
    PathState path;

    /// Half the gradient energy sits within two grid cells of the origin.
    bool grid_scale_concentration() const { return concentration_width < 2; }

    real gap_bound = 0;
    bool gap_ok = false;
    TwoLevelVerdict verdict;
    bool exploratory = false;

    bool passed() const;
};

/// Grid, eigenpair, regions, both solutions and the verification, in order.
/// Throws precondition_error if no region holds.
SolveReport solve_pipeline(const ProblemParams& p, const SolverOptions& opt = {});

}  // namespace critlog
