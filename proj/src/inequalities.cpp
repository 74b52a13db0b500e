#include "critlog/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace critlog {

namespace {

constexpr real series_cutoff = 0.05L;

// (1+x)^p - 1 - px, by its binomial series for small |x|.
real binomial_remainder(real p, real x) {
    if (std::fabs(x) < series_cutoff) {
        real term = p * (p - 1) / 2 * x * x;
        real sum = 0;
        for (int k = 2; k < 60 && term != 0; ++k) {
            sum += term;
            if (std::fabs(term) < 1e-24L * std::fabs(sum)) break;
            term *= (p - k) / (k + 1) * x;
        }
        return sum;
    }
    return std::expm1(p * std::log1p(x)) - p * x;
}

// (1+x)² log(1+x) - x. The x^k coefficient is a_k + 2a_{k-1} + a_{k-2}
// with a_j = (-1)^{j+1}/j the log1p coefficients.
real log_remainder(real x) {
    if (std::fabs(x) < series_cutoff) {
        auto a = [](int j) -> real { return j < 1 ? 0 : ((j % 2) ? real{1} : real{-1}) / j; };
        real sum = 0;
        real power = x * x;
        for (int k = 2; k < 60; ++k) {
            const real term = (a(k) + 2 * a(k - 1) + a(k - 2)) * power;
            sum += term;
            if (std::fabs(term) < 1e-24L * std::fabs(sum)) break;
            power *= x;
        }
        return sum;
    }
    return (1 + x) * (1 + x) * std::log1p(x) - x;
}

void require_point(real t, real y) {
    if (!(t > 0)) throw precondition_error("inequalities: t must be positive");
    if (!(y >= 0)) throw precondition_error("inequalities: y must be nonnegative");
}

// Maximum of f(t, y) over the box; rows are split into fixed chunks and the
// chunk maxima combined in order.
template <class F>
real scan_max(const BoxSpec& box, F f) {
    const int chunks = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
    std::vector<real> ys(static_cast<std::size_t>(box.y_samples));
    for (int j = 0; j < box.y_samples; ++j) ys[static_cast<std::size_t>(j)] = box.y_at(j);
    std::vector<std::future<real>> jobs;
    for (int c = 0; c < chunks; ++c) {
        jobs.push_back(std::async(std::launch::async, [&, c] {
            real best = -std::numeric_limits<real>::infinity();
            for (int i = c; i < box.t_samples; i += chunks) {
                const real t = box.t_at(i);
                for (real y : ys) best = std::max(best, f(t, y));
            }
            return best;
        }));
    }
    real best = -std::numeric_limits<real>::infinity();
    for (auto& j : jobs) best = std::max(best, j.get());
    if (!std::isfinite(best)) throw convergence_error("inequalities: scan produced a non-finite maximum");
    return best;
}

template <class F>
real scan_min(const BoxSpec& box, F f) {
    return -scan_max(box, [&](real t, real y) { return -f(t, y); });
}

real headroom(real max_ratio) { return std::max(real{0}, certificate_headroom * max_ratio); }

Certificate make_certificate(std::string lemma, const BoxSpec& box, real exponent) {
    Certificate c;
    c.lemma = std::move(lemma);
    c.box = box;
    c.exponent = exponent;
    return c;
}

}  // namespace

real g_function(real t, real y) {
    require_point(t, y);
    if (y == 0) return 0;
    const real x = y / t;
    return y * y * std::log(t * t) + 2 * t * t * log_remainder(x);
}

real f_function(real p, real t, real y) {
    require_point(t, y);
    if (y == 0) return 0;
    return std::pow(t, p) * binomial_remainder(p, y / t) - std::pow(y, p);
}

real f1_function(real m, real t, real y) {
    require_point(t, y);
    if (y == 0) return 0;
    return std::pow(t, m) * binomial_remainder(m, y / t);
}

void BoxSpec::validate() const {
    if (!(C1 > 0)) throw precondition_error("C1: must be positive");
    if (!(C2 > C1) || !std::isfinite(C2)) throw precondition_error("C2: must exceed C1");
    if (!(y_max > y_min) || !std::isfinite(y_max)) throw precondition_error("y_max: must exceed 1e-6");
    if (t_samples < 2) throw precondition_error("t_samples: need at least 2");
    if (y_samples < 2) throw precondition_error("y_samples: need at least 2");
    if (points() < 1000) throw precondition_error("t_samples: box needs at least 1000 grid points");
}

real BoxSpec::t_at(int i) const {
    if (i == t_samples - 1) return C2;
    return C1 + (C2 - C1) * i / (t_samples - 1);
}

real BoxSpec::y_at(int j) const {
    if (j == y_samples - 1) return y_max;
    return y_min * std::pow(y_max / y_min, static_cast<real>(j) / (y_samples - 1));
}

Certificate find_A1(const BoxSpec& box, real eps) {
    box.validate();
    if (!(eps > 0)) throw precondition_error("find_A1: eps must be positive");
    Certificate c = make_certificate("g_upper", box, eps);
    c.constant = headroom(scan_max(box, [&](real t, real y) { return (g_function(t, y) - std::pow(y, 2 + eps)) / (y * y); }));
    c.margin = scan_min(box, [&](real t, real y) {
        return (std::pow(y, 2 + eps) + c.constant * y * y - g_function(t, y)) / (y * y);
    });
    return c;
}

FConstants find_f_constants(real p, const BoxSpec& box, bool with_lower_bound) {
    box.validate();
    if (!(p > 2)) throw precondition_error("find_f_constants: p must exceed 2");
    if (with_lower_bound && !(p > 3))
        throw precondition_error("find_f_constants: the lower bound needs p > 3 (equivalently N <= 5 for p = 2*)");
    FConstants out;
    if (with_lower_bound) {
        Certificate c = make_certificate("f_lower", box, p);
        const real lead = p * box.C1 / 2;
        c.constant = headroom(
            scan_max(box, [&](real t, real y) { return (lead * std::pow(y, p - 1) - f_function(p, t, y)) / (y * y); }));
        c.margin = scan_min(box, [&](real t, real y) {
            return (f_function(p, t, y) - lead * std::pow(y, p - 1) + c.constant * y * y) / (y * y);
        });
        out.lower = c;
    }
    Certificate c = make_certificate("f_upper", box, p);
    const real quad = p * p / 2 * std::pow(box.C2, p - 2);
    c.constant = headroom(scan_max(box, [&](real t, real y) {
        return (std::fabs(f_function(p, t, y)) - quad * y * y) / (box.C2 * std::pow(y, p - 1));
    }));
    c.margin = scan_min(box, [&](real t, real y) {
        return (quad * y * y + c.constant * box.C2 * std::pow(y, p - 1) - std::fabs(f_function(p, t, y))) / (y * y);
    });
    out.upper = c;
    return out;
}

Certificate find_A3(real m, const BoxSpec& box) {
    box.validate();
    if (!(m > 2)) throw precondition_error("find_A3: m must exceed 2");
    Certificate c = make_certificate("f1_sandwich", box, m);
    c.constant = headroom(scan_max(box, [&](real t, real y) {
        const real f1 = f1_function(m, t, y);
        const real ym = std::pow(y, m);
        return std::max(f1 - 2 * ym, ym / 2 - f1) / (y * y);
    }));
    c.margin = scan_min(box, [&](real t, real y) {
        const real f1 = f1_function(m, t, y);
        const real ym = std::pow(y, m);
        const real a = c.constant * y * y;
        return std::min(2 * ym + a - f1, f1 - ym / 2 + a) / (y * y);
    });
    return c;
}

real xlog_lower_bound(real c) { return -std::exp(-1 - c); }

CorollaryVerdict check_corollary(const ProblemParams& p, const RadialGrid& g, const GridFunction& u0, real r0,
                                 const std::vector<GridFunction>& bubbles, const std::vector<real>& t_n,
                                 std::optional<real> eps, BoxSpec resolution) {
    p.validate();
    if (u0.size() != g.unknowns()) throw precondition_error("check_corollary: u0 does not match the grid");
    if (!u0.all_positive()) throw precondition_error("check_corollary: u0 must be positive");
    if (bubbles.size() != t_n.size() || bubbles.empty())
        throw precondition_error("check_corollary: need one t_n per bubble");
    for (const auto& b : bubbles)
        if (b.size() != g.unknowns()) throw precondition_error("check_corollary: bubble does not match the grid");
    for (real t : t_n)
        if (!(t > 0)) throw precondition_error("check_corollary: t_n must be positive");

    CorollaryVerdict v;
    v.L1 = std::numeric_limits<real>::infinity();
    v.L2 = 0;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        if (g.node(i) > 2 * r0) break;
        v.L1 = std::min(v.L1, u0[i]);
        v.L2 = std::max(v.L2, u0[i]);
    }
    if (!(v.L2 > v.L1)) v.L2 = v.L1 * (1 + 1e-9L);

    const real two_star = p.two_star();
    const real e = eps.value_or(p.q - 2);
    real y_top = 0;
    for (std::size_t k = 0; k < bubbles.size(); ++k)
        for (std::size_t i = 0; i < u0.size(); ++i) y_top = std::max(y_top, t_n[k] * bubbles[k][i]);

    BoxSpec box = resolution;
    box.C1 = v.L1;
    box.C2 = v.L2;
    box.y_max = std::max(box.y_max, 2 * y_top);

    const Certificate a1 = find_A1(box, e);
    v.lower_f_bound_checked = two_star > 3;
    const FConstants fc = find_f_constants(two_star, box, v.lower_f_bound_checked);
    const Certificate a3 = find_A3(p.q, box);
    v.B1 = a1.constant;
    v.B2 = std::max(fc.upper.constant, fc.lower ? fc.lower->constant : real{0});
    v.B3 = a3.constant;
    v.certificates = {a1};
    if (fc.lower) v.certificates.push_back(*fc.lower);
    v.certificates.push_back(fc.upper);
    v.certificates.push_back(a3);

    v.worst_margin = std::numeric_limits<real>::infinity();
    auto record = [&](real margin, const char* name) {
        if (margin < v.worst_margin) {
            v.worst_margin = margin;
            v.worst_bound = name;
        }
    };
    bool trivial_ok = true;
    for (std::size_t k = 0; k < bubbles.size(); ++k) {
        for (std::size_t i = 0; i < u0.size(); ++i) {
            const real t = u0[i];
            const real y = t_n[k] * bubbles[k][i];
            if (y <= 0) {
                ++v.trivial_points;
                trivial_ok = trivial_ok && g_function(t, 0) == 0 && f_function(two_star, t, 0) == 0 &&
                             f1_function(p.q, t, 0) == 0;
                continue;
            }
            ++v.support_points;
            const real y2 = y * y;
            const real gv = g_function(t, y);
            const real fv = f_function(two_star, t, y);
            const real f1 = f1_function(p.q, t, y);
            record((std::pow(y, 2 + e) + v.B1 * y2 - gv) / y2, "g_upper");
            if (v.lower_f_bound_checked)
                record((fv - two_star / 2 * v.L1 * std::pow(y, two_star - 1) + v.B2 * y2) / y2, "f_lower");
            record((two_star * two_star / 2 * std::pow(v.L2, two_star - 2) * y2 +
                    v.B2 * v.L2 * std::pow(y, two_star - 1) - std::fabs(fv)) /
                       y2,
                   "f_upper");
            record((2 * std::pow(y, p.q) + v.B3 * y2 - f1) / y2, "f1_upper");
            record((f1 - std::pow(y, p.q) / 2 + v.B3 * y2) / y2, "f1_lower");
        }
    }
    if (!trivial_ok) {
        v.worst_margin = -1;
        v.worst_bound = "outside_support";
    }
    v.holds = trivial_ok && v.worst_margin > 0;
    return v;
}

}  // namespace critlog
