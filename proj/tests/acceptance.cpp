// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "critlog/bubbles.hpp"
#include "critlog/cli.hpp"
#include "critlog/inequalities.hpp"
#include "critlog/solvers.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

using namespace critlog;
using critlog::test::rel_err;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < limit_seconds;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %s  (%.2f s of %.0f s)  %s%s\n", id, pass ? "PASS" : "FAIL", title, seconds,
                limit_seconds, o.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
}

std::string fmt(real x) { return format_real(x); }

ProblemParams m2_params() { return {4, 1, 0, 0, -0.01L, 3, 1}; }

SolverOptions at_resolution(int M) {
    SolverOptions o;
    o.grid_nodes = M;
    return o;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Gamma-function form of the sharp Sobolev constant.
real sobolev_oracle(int N) {
    const real n = N;
    return pi * n * (n - 2) * std::pow(std::tgamma(n / 2) / std::tgamma(n), 2 / n);
}

}  // namespace

int main() {
    std::optional<SolveReport> m2;

    criterion(1, "principal eigenvalue of B1 in R^3 at M = 800", 1, [] {
        const real l1 = principal_eigenpair(build_grid(3, 1, 800)).eigenvalue;
        const real err = rel_err(l1, pi * pi);
        return Outcome{err < 1e-3L, "lambda1 = " + fmt(l1) + ", rel err " + fmt(err)};
    });

    criterion(2, "best Sobolev constant for N = 3, 4, 5", 1, [] {
        Outcome o{true, ""};
        for (int N : {3, 4, 5}) {
            const real S = best_sobolev_constant(N);
            const real err = rel_err(S, sobolev_oracle(N));
            o.ok = o.ok && err < 1e-3L;
            o.detail += "S(" + std::to_string(N) + ") = " + fmt(S) + " ";
        }
        return o;
    });

    criterion(3, "gradient vs central differences, 100 profiles, 5 parameter sets", 10, [] {
        const ProblemParams ps[] = {m2_params(),
                                    {3, 1, 1, 1, -1, 3, 1},
                                    {4, 1, 1, 0, -1, 3, 1},
                                    {3, 1, -0.1L, 8, -0.1L, 2.5L, 1},
                                    {5, 0.5L, 2, -1, -2, 3, 1.5L}};
        real worst = 0;
        int checked = 0;
        for (const auto& p : ps) {
            const RadialGrid g = build_grid(p.N, p.R, 200);
            for (int k = 0; k < 20; ++k, ++checked) {
                const GridFunction u = test::random_profile(g);
                const GridFunction v = test::random_direction(g);
                const real eps = 1e-5L;
                const real fd = (energy_value(p, g, u + eps * v) - energy_value(p, g, u - eps * v)) / (2 * eps);
                const real an = weighted_dot(g, gradient_field(p, g, u), v);
                worst = std::max(worst, std::fabs(fd - an) / std::fabs(an));
            }
        }
        return Outcome{worst < 1e-6L, std::to_string(checked) + " directions, worst rel err " + fmt(worst)};
    });

    criterion(4, "two-solution pipeline on the M2 instance, M = 400", 300, [&] {
        m2 = solve_pipeline(m2_params(), at_resolution(400));
        const SolveReport& r = *m2;
        const bool signs = r.c_rho < 0 && 0 < r.c_M;
        const bool residuals = r.residual0.absolute < 1e-8L && r.residual_mp.absolute < 1e-8L;
        const bool interior = r.norm_u0 < r.rho;
        const real bound = r.c_rho + r.S * r.S / 4;
        const bool gap = r.c_M < bound;
        std::string d = "c_rho = " + fmt(r.c_rho) + ", c_M = " + fmt(r.c_M) + ", residuals " +
                        fmt(r.residual0.absolute) + " / " + fmt(r.residual_mp.absolute) + ", |u0| = " +
                        fmt(r.norm_u0) + " < rho = " + fmt(r.rho) + ", gap bound " + fmt(bound) +
                        (gap ? "" : " EXCEEDED");
        return Outcome{signs && residuals && interior && gap, d};
    });

    criterion(5, "pipeline on a nu > 0 (N = 4, q = 3) and a nu < 0 (N = 3, q = 2.5) instance", 600, [] {
        const SolveReport a = solve_pipeline({4, 1, 1, 0, -1, 3, 1}, at_resolution(400));
        const SolveReport b = solve_pipeline({3, 1, -0.1L, 8, -0.1L, 2.5L, 1}, at_resolution(400));
        const bool ra = a.regions.in_M3 || a.regions.in_M4;
        const bool rb = b.regions.in_M1 || b.regions.in_M2;
        std::string d = "nu>0: c_rho = " + fmt(a.c_rho) + ", c_M = " + fmt(a.c_M) + ", passed " +
                        (a.passed() ? "yes" : "no") + "; nu<0: c_rho = " + fmt(b.c_rho) + ", c_M = " + fmt(b.c_M) +
                        ", passed " + (b.passed() ? "yes" : "no");
        return Outcome{ra && rb && a.passed() && b.passed(), d};
    });

    criterion(6, "fiber structure of the converged u0 (M2 instance)", 5, [&] {
        if (!m2) return Outcome{false, "no M2 solution (criterion 4 threw)"};
        const ProblemParams p = m2_params();
        const RadialGrid g = build_grid(4, 1, 400);
        const SolverOptions o = at_resolution(400);
        const FiberProfile f = g_profile(p, g, m2->u0, o.fiber_t_max, o.fiber_samples);
        bool min_at_one = false;
        for (real t : f.local_minima) min_at_one = min_at_one || std::fabs(t - 1) <= 0.05L;
        bool negative = true;
        for (int k = 1; k <= o.fiber_samples; ++k)
            negative = negative && energy_value(p, g, (static_cast<real>(k) / o.fiber_samples) * m2->u0) < 0;
        std::string d = std::to_string(f.derivative_sign_changes) + " sign changes, minimum at t = 1: " +
                        (min_at_one ? "yes" : "no") + ", I(t u0) < 0 on (0,1]: " + (negative ? "yes" : "no");
        return Outcome{f.derivative_sign_changes <= 2 && min_at_one && negative, d};
    });

    criterion(7, "inequality certificates on [1/2, 2] x (0, 1e3]", 30, [] {
        const BoxSpec box;
        std::vector<Certificate> certs = {find_A1(box, 1)};
        const FConstants f = find_f_constants(4, box);
        certs.push_back(*f.lower);
        certs.push_back(f.upper);
        certs.push_back(find_A3(2.5L, box));
        bool ok = box.points() >= 1000000;
        std::string d = std::to_string(box.points()) + " points;";
        for (const auto& c : certs) {
            ok = ok && std::isfinite(c.constant) && c.holds();
            d += " " + c.lemma + " margin " + fmt(c.margin) + ";";
        }
        const real y = 1e-6L;
        const real g_limit = g_function(box.C2, y) / (y * y);
        const real g_expected = 3 + std::log(box.C2 * box.C2);
        ok = ok && rel_err(g_limit, g_expected) < 0.01L;
        for (real m : {2.5L, 3.0L})
            for (real t : {box.C1, real{1}, box.C2}) {
                const real lim = f1_function(m, t, y) / (y * y);
                ok = ok && rel_err(lim, m * (m - 1) / 2 * std::pow(t, m - 2)) < 0.01L;
            }
        d += " g/y^2 -> " + fmt(g_limit);
        return Outcome{ok, d};
    });

    criterion(8, "bubble norm exponents and gradient convergence", 30, [] {
        const auto ns = default_bubble_scales();
        const PowerFit f3 = fit_norm_exponent(3, 0.25L, ns, 2);
        const PowerFit f5 = fit_norm_exponent(5, 0.25L, ns, 2);
        const PowerFit f4 = fit_norm_exponent(4, 0.25L, ns, 2);
        bool ok = rel_err(f3.slope, -1) < 0.05L && rel_err(f5.slope, -2) < 0.05L && f4.log_corrected &&
                  rel_err(f4.slope, -2) < 0.05L;
        std::string d = "slopes N=3 " + fmt(f3.slope) + ", N=5 " + fmt(f5.slope) + ", N=4 (log) " + fmt(f4.slope);
        for (int N : {3, 4, 5}) {
            const BubbleAsymptotics a = bubble_asymptotics(N, 0.25L, ns, best_sobolev_constant(N));
            ok = ok && a.gradient_gap.slope <= -(N - 2) * 0.9L;
            d += "; gradient gap N=" + std::to_string(N) + " " + fmt(a.gradient_gap.slope);
        }
        return Outcome{ok, d};
    });

    criterion(9, "c_rho and c_M change < 2% from M = 400 to M = 800 (M2)", 900, [&] {
        if (!m2) return Outcome{false, "no M = 400 solution (criterion 4 threw)"};
        const SolveReport fine = solve_pipeline(m2_params(), at_resolution(800));
        const real d_rho = rel_err(fine.c_rho, m2->c_rho);
        const real d_m = rel_err(fine.c_M, m2->c_M);
        return Outcome{d_rho < 0.02L && d_m < 0.02L, "c_rho " + fmt(m2->c_rho) + " -> " + fmt(fine.c_rho) +
                                                          ", c_M " + fmt(m2->c_M) + " -> " + fmt(fine.c_M) +
                                                          " (changes " + fmt(d_rho) + ", " + fmt(d_m) + ")"};
    });

    criterion(10, "two cmd_solve runs give byte-identical outputs", 600, [] {
        const RunConfig cfg = parse_config(Json{{"N", 4}, {"mu", 1}, {"nu", 0}, {"lambda", 0}, {"theta", -0.01L}});
        const fs::path base = fs::temp_directory_path() / "critlog_acceptance_determinism";
        fs::remove_all(base);
        int codes[2];
        for (int k = 0; k < 2; ++k) {
            CommandContext ctx;
            ctx.out_dir = base / std::to_string(k);
            codes[k] = cmd_solve(cfg, ctx);
        }
        bool same = codes[0] == codes[1];
        std::string d;
        for (const char* f : {"solve.json", "u0.csv", "ump.csv", "path.csv"}) {
            const std::string a = slurp(base / "0" / f), b = slurp(base / "1" / f);
            same = same && !a.empty() && a == b;
            d += std::string(f) + (a == b ? " identical; " : " DIFFERS; ");
        }
        return Outcome{same, d};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
