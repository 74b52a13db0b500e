#include "critlog/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

namespace critlog {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> solver_int_keys = {"M", "P", "newton_max_iterations", "descent_max_iterations",
                                                  "mountain_pass_max_iterations", "fiber_samples", "t_samples",
                                                  "y_samples"};

real number(const Json& j, const std::string& key) {
    if (!j.is_number()) throw config_error(key + ": expected a number");
    return j.get<real>();
}

int integer(const Json& j, const std::string& key) {
    if (j.is_number_integer() || j.is_number_unsigned()) {
        const auto v = j.get<std::int64_t>();
        if (v < INT32_MIN || v > INT32_MAX) throw config_error(key + ": out of range");
        return static_cast<int>(v);
    }
    throw config_error(key + ": expected an integer");
}

std::vector<real> number_list(const Json& j, const std::string& key) {
    if (!j.is_array()) throw config_error(key + ": expected an array of numbers");
    std::vector<real> out;
    for (const auto& x : j) out.push_back(number(x, key));
    return out;
}

// Re-labels a module precondition as a config error, keeping its key prefix.
template <class F>
void validated(F f) {
    try {
        f();
    } catch (const precondition_error& e) {
        throw config_error(e.what());
    }
}

void validate_scales(const std::vector<real>& n_list) {
    if (n_list.size() < 5) throw config_error("n_list: need at least 5 scales");
    for (real n : n_list)
        if (!(n > 1) || !std::isfinite(n)) throw config_error("n_list: scales must exceed 1");
    const real ratio = n_list[1] / n_list[0];
    if (!(ratio > 1)) throw config_error("n_list: must be increasing");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (std::fabs(n_list[k] / n_list[k - 1] - ratio) > 1e-9L * ratio)
            throw config_error("n_list: must be geometric");
}

void validate(const RunConfig& c) {
    validated([&] { c.params.validate(); });
    validated([&] { c.solver.validate(); });
    validated([&] { c.box.validate(); });
    const real r0 = c.solver.r0.value_or(c.params.R / 4);
    if (4 * r0 > c.params.R * (1 + 1e-15L)) throw config_error("r0: need 4 r0 <= R");
    if (c.eps && !(*c.eps > 0)) throw config_error("eps: must be positive");
    validate_scales(c.n_list);
    for (const auto& [name, values] : c.sweep) {
        if (name == "N")
            for (real v : values)
                if (v != std::floor(v) || v < 3) throw config_error("sweep_N: entries must be integers >= 3");
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::string csv_cell(std::optional<real> x) { return x ? format_real(*x) : std::string(); }

std::ostream& log_of(const CommandContext& ctx) {
    static std::ostream discard(nullptr);
    return ctx.log ? *ctx.log : discard;
}

struct RegionRun {
    RegionReport report;
    RegionValues values;
};

RegionRun evaluate_regions(const ProblemParams& p, int M) {
    const RadialGrid g = build_grid(p.N, p.R, M);
    const real lambda1 = principal_eigenpair(g).eigenvalue;
    const real S = best_sobolev_constant(p.N);
    return {region_membership(p, S, lambda1, g.exact_volume()), region_values(p, S, lambda1, g.exact_volume())};
}

}  // namespace

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names = {"N", "mu", "nu", "lambda", "theta", "q", "R"};
    return names;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k = {"N",
                                      "mu",
                                      "nu",
                                      "lambda",
                                      "theta",
                                      "q",
                                      "R",
                                      "M",
                                      "bubble_n",
                                      "r0",
                                      "P",
                                      "ball_margin",
                                      "residual_tolerance",
                                      "relative_tolerance",
                                      "newton_tolerance",
                                      "newton_max_iterations",
                                      "descent_max_iterations",
                                      "mountain_pass_tolerance",
                                      "mountain_pass_max_iterations",
                                      "fiber_samples",
                                      "fiber_t_max",
                                      "C1",
                                      "C2",
                                      "y_max",
                                      "t_samples",
                                      "y_samples",
                                      "eps",
                                      "n_list",
                                      "out",
                                      "sweep_solve"};
        for (const auto& name : sweep_parameters()) k.push_back("sweep_" + name);
        return k;
    }();
    return keys;
}

RunConfig parse_config(const Json& j) {
    if (!j.is_object()) throw config_error("config: expected a flat JSON object");
    RunConfig c;
    const auto& known = config_keys();
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) throw config_error(key + ": unknown key");
        const bool is_int = key == "N" || std::find(solver_int_keys.begin(), solver_int_keys.end(), key) !=
                                              solver_int_keys.end();
        if (is_int) {
            const int v = integer(value, key);
            if (key == "N") c.params.N = v;
            else if (key == "M") c.solver.grid_nodes = v;
            else if (key == "P") c.solver.path_nodes = v;
            else if (key == "newton_max_iterations") c.solver.newton_max_iterations = v;
            else if (key == "descent_max_iterations") c.solver.descent_max_iterations = v;
            else if (key == "mountain_pass_max_iterations") c.solver.mountain_pass_max_iterations = v;
            else if (key == "fiber_samples") c.solver.fiber_samples = v;
            else if (key == "t_samples") c.box.t_samples = v;
            else if (key == "y_samples") c.box.y_samples = v;
        } else if (key == "out") {
            if (!value.is_string()) throw config_error("out: expected a string");
            c.out = value.get<std::string>();
        } else if (key == "sweep_solve") {
            if (!value.is_boolean()) throw config_error("sweep_solve: expected true or false");
            c.sweep_solve = value.get<bool>();
        } else if (key == "n_list") {
            c.n_list = number_list(value, key);
        } else if (key.rfind("sweep_", 0) == 0) {
            auto values = number_list(value, key);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            c.sweep[key.substr(6)] = std::move(values);
        } else {
            const real v = number(value, key);
            if (key == "mu") c.params.mu = v;
            else if (key == "nu") c.params.nu = v;
            else if (key == "lambda") c.params.lambda = v;
            else if (key == "theta") c.params.theta = v;
            else if (key == "q") c.params.q = v;
            else if (key == "R") c.params.R = v;
            else if (key == "bubble_n") c.solver.bubble_n = v;
            else if (key == "r0") c.solver.r0 = v;
            else if (key == "ball_margin") c.solver.ball_margin = v;
            else if (key == "residual_tolerance") c.solver.residual_tolerance = v;
            else if (key == "relative_tolerance") c.solver.relative_tolerance = v;
            else if (key == "newton_tolerance") c.solver.newton_tolerance = v;
            else if (key == "mountain_pass_tolerance") c.solver.mountain_pass_tolerance = v;
            else if (key == "fiber_t_max") c.solver.fiber_t_max = v;
            else if (key == "C1") c.box.C1 = v;
            else if (key == "C2") c.box.C2 = v;
            else if (key == "y_max") c.box.y_max = v;
            else if (key == "eps") c.eps = v;
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw config_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(parse_json(ss.str()));
    } catch (const precondition_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

void check_hypotheses(const ProblemParams& p, bool explore) {
    if (p.nu <= 0 && p.N > 5 && !explore)
        throw config_error("N: the mountain-pass theorem for nu <= 0 needs 3 <= N <= 5 "
                           "(N >= 6 is open; rerun with --explore-open-problem)");
    // For N >= 6, 2* - 1 <= 2 < q, so exploring has to lift this gate as well.
    if (p.nu < 0 && !(p.q < p.two_star() - 1) && !(explore && p.N > 5))
        throw config_error("q: the mountain-pass theorem for nu < 0 needs q < 2* - 1 = " +
                           format_real(p.two_star() - 1));
}

ProblemParams with_parameter(ProblemParams p, const std::string& name, real value) {
    if (name == "N") p.N = static_cast<int>(value);
    else if (name == "mu") p.mu = value;
    else if (name == "nu") p.nu = value;
    else if (name == "lambda") p.lambda = value;
    else if (name == "theta") p.theta = value;
    else if (name == "q") p.q = value;
    else if (name == "R") p.R = value;
    else throw config_error(name + ": not a sweep parameter");
    return p;
}

int cmd_regions(const RunConfig& cfg, const CommandContext& ctx) {
    const RegionRun run = evaluate_regions(cfg.params, cfg.solver.grid_nodes);
    Json j = Json{{"params", to_json(cfg.params)}, {"M", cfg.solver.grid_nodes}};
    j["regions"] = to_json(run.report, run.values);
    fs::create_directories(ctx.out_dir);
    write_file(ctx.out_dir / "regions.json", dump_json(j));
    auto& log = log_of(ctx);
    log << "in_M1=" << run.report.in_M1 << " in_M2=" << run.report.in_M2 << " in_M3=" << run.report.in_M3
        << " in_M4=" << run.report.in_M4 << '\n';
    return run.report.any() ? exit_ok : exit_gate;
}

int cmd_solve(const RunConfig& cfg, const CommandContext& ctx) {
    check_hypotheses(cfg.params, ctx.explore);
    const bool exploratory = cfg.params.nu <= 0 && cfg.params.N > 5;
    auto& log = log_of(ctx);
    if (exploratory) log << "EXPLORATORY: N >= 6 with nu <= 0 is outside the theorem\n";
    const RegionRun run = evaluate_regions(cfg.params, cfg.solver.grid_nodes);
    if (!run.report.any()) {
        log << "refusing to solve: parameters lie in none of M1-M4\n";
        return exit_gate;
    }
    SolveReport rep;
    try {
        rep = solve_pipeline(cfg.params, cfg.solver);
    } catch (const convergence_error& e) {
        log << "solve failed: " << e.what() << '\n';
        return exit_verification;
    }
    rep.exploratory = exploratory;
    const RadialGrid g = build_grid(cfg.params.N, cfg.params.R, cfg.solver.grid_nodes);
    fs::create_directories(ctx.out_dir);
    write_file(ctx.out_dir / "solve.json", dump_json(to_json(rep)));
    std::ostringstream u0, ump, path;
    write_grid_function_csv(u0, g, rep.u0);
    write_grid_function_csv(ump, g, rep.u_mp);
    write_path_csv(path, rep.path);
    write_file(ctx.out_dir / "u0.csv", u0.str());
    write_file(ctx.out_dir / "ump.csv", ump.str());
    write_file(ctx.out_dir / "path.csv", path.str());

    log << "c_rho=" << format_real(rep.c_rho) << " c_M=" << format_real(rep.c_M)
        << " gap_bound=" << format_real(rep.gap_bound) << " gap_ok=" << rep.gap_ok
        << " concentration_width=" << format_real(rep.concentration_width) << '\n';
    for (const auto& a : rep.verdict.assertions)
        log << (a.passed ? "pass " : "FAIL ") << a.name << ": " << a.detail << '\n';
    if (rep.grid_scale_concentration()) log << "FAIL u_mp is concentrated at grid scale\n";
    return rep.passed() ? exit_ok : exit_verification;
}

int cmd_verify(const RunConfig& cfg, const CommandContext& ctx) {
    const ProblemParams& p = cfg.params;
    const real two_star = p.two_star();
    const real eps = cfg.eps.value_or(p.q - 2);

    std::vector<Certificate> certs;
    certs.push_back(find_A1(cfg.box, eps));
    const FConstants fc = find_f_constants(two_star, cfg.box, two_star > 3);
    if (fc.lower) certs.push_back(*fc.lower);
    certs.push_back(fc.upper);
    certs.push_back(find_A3(p.q, cfg.box));

    const real r0 = cfg.solver.r0.value_or(p.R / 4);
    std::vector<SlopeRow> slopes;
    const PowerFit norm = fit_norm_exponent(p.N, r0, cfg.n_list, real{2});
    const real expected = expected_norm_exponent(p.N, 2);
    slopes.push_back({"norm_p", p.N, 2, norm.slope, norm.intercept, norm.residual, expected, norm.log_corrected,
                      std::fabs(norm.slope - expected) <= 0.05L * std::fabs(expected)});
    const BubbleAsymptotics asym = bubble_asymptotics(p.N, r0, cfg.n_list, best_sobolev_constant(p.N));
    const real n = p.N;
    slopes.push_back({"gradient_gap", p.N, 2, asym.gradient_gap.slope, asym.gradient_gap.intercept,
                      asym.gradient_gap.residual, -(n - 2), false, asym.gradient_gap.slope <= -(n - 2) * 0.9L});
    slopes.push_back({"critical_gap", p.N, two_star, asym.critical_gap.slope, asym.critical_gap.intercept,
                      asym.critical_gap.residual, -n, false, asym.critical_gap.slope <= -n * 0.9L});

    Json jc = Json::array();
    for (const auto& c : certs) jc.push_back(to_json(c));
    fs::create_directories(ctx.out_dir);
    write_file(ctx.out_dir / "certificates.json", dump_json(Json{{"certificates", jc}}));
    std::ostringstream os;
    write_slopes_csv(os, slopes);
    write_file(ctx.out_dir / "slopes.csv", os.str());

    auto& log = log_of(ctx);
    int code = exit_ok;
    for (const auto& c : certs) {
        log << (c.holds() ? "pass " : "FAIL ") << c.lemma << " constant=" << format_real(c.constant)
            << " margin=" << format_real(c.margin) << '\n';
        if (!c.holds()) code = exit_verification;
    }
    for (const auto& s : slopes) {
        log << (s.ok ? "pass " : "FAIL ") << s.quantity << " slope=" << format_real(s.slope)
            << " expected=" << format_real(s.expected) << '\n';
        if (!s.ok) code = exit_verification;
    }
    return code;
}

namespace {

struct SweepRow {
    ProblemParams params;
    std::optional<RegionRun> regions;
    std::optional<real> c_rho, c_M;
    std::optional<bool> gap_ok, passed;
    bool exploratory = false;
    std::string error;
};

SweepRow run_instance(const ProblemParams& p, const RunConfig& cfg, bool explore) {
    SweepRow row;
    row.params = p;
    try {
        p.validate();
        row.regions = evaluate_regions(p, cfg.solver.grid_nodes);
        if (cfg.sweep_solve && row.regions->report.any()) {
            check_hypotheses(p, explore);
            row.exploratory = p.nu <= 0 && p.N > 5;
            const SolveReport rep = solve_pipeline(p, cfg.solver);
            row.c_rho = rep.c_rho;
            row.c_M = rep.c_M;
            row.gap_ok = rep.gap_ok;
            row.passed = rep.passed();
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        std::replace(row.error.begin(), row.error.end(), ',', ';');
        std::replace(row.error.begin(), row.error.end(), '\n', ' ');
    }
    return row;
}

std::string bool_cell(std::optional<bool> b) { return b ? (*b ? "true" : "false") : ""; }

}  // namespace

int cmd_sweep(const RunConfig& cfg, const CommandContext& ctx) {
    bool any = false;
    for (const auto& [name, values] : cfg.sweep) any = any || !values.empty();
    if (!any) throw config_error("sweep: at least one sweep_* range must be nonempty");

    // Cartesian product in lexicographic order of (N, mu, nu, lambda, theta, q, R).
    std::vector<ProblemParams> instances{cfg.params};
    for (const auto& name : sweep_parameters()) {
        const auto it = cfg.sweep.find(name);
        if (it == cfg.sweep.end() || it->second.empty()) continue;
        std::vector<ProblemParams> next;
        for (const auto& base : instances)
            for (real v : it->second) next.push_back(with_parameter(base, name, v));
        instances = std::move(next);
    }

    std::vector<SweepRow> rows(instances.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < instances.size(); start += workers) {
        std::vector<std::future<SweepRow>> jobs;
        for (std::size_t i = start; i < std::min(instances.size(), start + workers); ++i)
            jobs.push_back(std::async(std::launch::async, run_instance, instances[i], std::cref(cfg), ctx.explore));
        for (std::size_t k = 0; k < jobs.size(); ++k) rows[start + k] = jobs[k].get();
    }

    std::ostringstream os;
    os << "N,mu,nu,lambda,theta,q,R,m1,m2,m3,m4,in_M1,in_M2,in_M3,in_M4,alpha,rho,c_rho,c_M,gap_ok,passed,"
          "exploratory,error\n";
    for (const auto& r : rows) {
        const auto& p = r.params;
        os << p.N << ',' << format_real(p.mu) << ',' << format_real(p.nu) << ',' << format_real(p.lambda) << ','
           << format_real(p.theta) << ',' << format_real(p.q) << ',' << format_real(p.R) << ',';
        if (r.regions) {
            const auto& v = r.regions->values;
            const auto& m = r.regions->report;
            os << format_real(v.m1) << ',' << format_real(v.m2) << ',' << format_real(v.m3) << ','
               << format_real(v.m4) << ',' << bool_cell(m.in_M1) << ',' << bool_cell(m.in_M2) << ','
               << bool_cell(m.in_M3) << ',' << bool_cell(m.in_M4) << ',';
            os << (m.any() ? csv_cell(m.alpha) : "") << ',' << (m.any() ? csv_cell(m.rho) : "") << ',';
        } else {
            os << ",,,,,,,,,,";
        }
        os << csv_cell(r.c_rho) << ',' << csv_cell(r.c_M) << ',' << bool_cell(r.gap_ok) << ','
           << bool_cell(r.passed) << ',' << (r.exploratory ? "true" : "false") << ',' << r.error << '\n';
    }
    fs::create_directories(ctx.out_dir);
    write_file(ctx.out_dir / "sweep.csv", os.str());
    log_of(ctx) << rows.size() << " rows written\n";
    return exit_ok;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Two-solution solver for -Δu = μ|u|^{2*-2}u + ν|u|^{q-2}u + λu + θu log u² on a ball"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    bool explore = false;
    for (const char* name : {"regions", "solve", "verify", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat JSON config");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--explore-open-problem", explore, "allow N >= 6 with nu <= 0 (marked EXPLORATORY)");
    }
    app.get_subcommand("regions")->description("evaluate the M1-M4 memberships and (alpha, rho)");
    app.get_subcommand("solve")->description("compute u0 and the mountain-pass solution");
    app.get_subcommand("verify")->description("inequality certificates and bubble asymptotics");
    app.get_subcommand("sweep")->description("regions (and optionally solve) over sweep_* ranges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        RunConfig cfg = config_path.empty() ? parse_config(Json::object()) : load_config(config_path);
        CommandContext ctx;
        ctx.out_dir = !out_dir.empty() ? fs::path(out_dir) : fs::path(cfg.out.value_or("."));
        ctx.explore = explore;
        ctx.log = &std::cout;
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "regions") return cmd_regions(cfg, ctx);
        if (name == "solve") return cmd_solve(cfg, ctx);
        if (name == "verify") return cmd_verify(cfg, ctx);
        return cmd_sweep(cfg, ctx);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const precondition_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_verification;
    }
}

}  // namespace critlog
