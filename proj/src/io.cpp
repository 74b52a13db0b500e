#include "critlog/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace critlog {

namespace {

void dump(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            dump(value, out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& value : j) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            dump(value, out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        const real x = j.get<real>();
        out += std::isfinite(x) ? format_real(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

Json residual_json(const Residual& r) { return Json{{"absolute", r.absolute}, {"relative", r.relative}}; }

Json optional_json(const std::optional<real>& x) { return x ? Json(*x) : Json(nullptr); }

std::string read_header(std::istream& is, const std::string& expected) {
    std::string line;
    if (!std::getline(is, line)) throw precondition_error("csv: missing header");
    if (line != expected) throw precondition_error("csv: expected header '" + expected + "', got '" + line + "'");
    return line;
}

std::vector<std::string> read_row(const std::string& line, std::size_t columns) {
    auto fields = split_csv_line(line);
    if (fields.size() != columns)
        throw precondition_error("csv: expected " + std::to_string(columns) + " fields in '" + line + "'");
    return fields;
}

bool parse_bool(const std::string& field) {
    if (field == "true") return true;
    if (field == "false") return false;
    throw precondition_error("csv: not a boolean: '" + field + "'");
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_real(real x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.21Lg", x);
    return buf;
}

std::string dump_json(const Json& j) {
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error(std::string("json: ") + e.what());
    }
}

real parse_real(const std::string& field) {
    if (field.empty()) throw precondition_error("csv: empty numeric field");
    char* end = nullptr;
    errno = 0;
    const real x = std::strtold(field.c_str(), &end);
    if (end != field.c_str() + field.size() || (errno == ERANGE && std::fabs(x) > 1))
        throw precondition_error("csv: not a number: '" + field + "'");
    return x;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void write_grid_function_csv(std::ostream& os, const RadialGrid& g, const GridFunction& u) {
    if (u.size() != g.unknowns()) throw precondition_error("write_grid_function_csv: size mismatch");
    os << "r,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) os << format_real(g.node(i)) << ',' << format_real(u[i]) << '\n';
}

SampledProfile read_grid_function_csv(std::istream& is) {
    read_header(is, "r,value");
    SampledProfile out;
    std::vector<real> values;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = read_row(line, 2);
        out.r.push_back(parse_real(f[0]));
        values.push_back(parse_real(f[1]));
    }
    out.u = GridFunction(std::move(values));
    if (!out.u.all_finite()) throw precondition_error("read_grid_function_csv: non-finite value");
    return out;
}

void write_path_csv(std::ostream& os, const PathState& path) {
    os << "node_index,t,energy\n";
    for (std::size_t i = 0; i < path.energies.size(); ++i)
        os << i << ',' << format_real(path.parameters[i]) << ',' << format_real(path.energies[i]) << '\n';
}

std::vector<PathRow> read_path_csv(std::istream& is) {
    read_header(is, "node_index,t,energy");
    std::vector<PathRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = read_row(line, 3);
        rows.push_back({static_cast<std::size_t>(std::stoul(f[0])), parse_real(f[1]), parse_real(f[2])});
    }
    return rows;
}

namespace {
constexpr const char* slopes_header = "quantity,N,p,slope,intercept,residual,expected,log_corrected,ok";
}

void write_slopes_csv(std::ostream& os, const std::vector<SlopeRow>& rows) {
    os << slopes_header << '\n';
    for (const auto& r : rows)
        os << r.quantity << ',' << r.N << ',' << format_real(r.p) << ',' << format_real(r.slope) << ','
           << format_real(r.intercept) << ',' << format_real(r.residual) << ',' << format_real(r.expected) << ','
           << bool_text(r.log_corrected) << ',' << bool_text(r.ok) << '\n';
}

std::vector<SlopeRow> read_slopes_csv(std::istream& is) {
    read_header(is, slopes_header);
    std::vector<SlopeRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = read_row(line, 9);
        rows.push_back({f[0], std::stoi(f[1]), parse_real(f[2]), parse_real(f[3]), parse_real(f[4]),
                        parse_real(f[5]), parse_real(f[6]), parse_bool(f[7]), parse_bool(f[8])});
    }
    return rows;
}

Json to_json(const ProblemParams& p) {
    return Json{{"N", p.N}, {"mu", p.mu}, {"nu", p.nu}, {"lambda", p.lambda}, {"theta", p.theta}, {"q", p.q}, {"R", p.R}};
}

Json to_json(const RegionReport& r, const RegionValues& v) {
    return Json{{"in_M1", r.in_M1},
                {"in_M2", r.in_M2},
                {"in_M3", r.in_M3},
                {"in_M4", r.in_M4},
                {"m1", v.m1},
                {"m2", v.m2},
                {"m3", v.m3},
                {"m4", v.m4},
                {"S", r.S},
                {"lambda1", r.lambda1},
                {"volume", r.volume},
                {"alpha", optional_json(r.alpha)},
                {"rho", optional_json(r.rho)},
                {"applicable_case", to_string(r.applicable_case)},
                {"geometry_case", to_string(r.geometry_case)}};
}

Json to_json(const Certificate& c) {
    return Json{{"lemma", c.lemma},
                {"box",
                 {{"C1", c.box.C1},
                  {"C2", c.box.C2},
                  {"y_min", BoxSpec::y_min},
                  {"y_max", c.box.y_max},
                  {"t_samples", c.box.t_samples},
                  {"y_samples", c.box.y_samples}}},
                {"exponent", c.exponent},
                {"constant", c.constant},
                {"margin", c.margin},
                {"grid_sizes", {{"t", c.box.t_samples}, {"y", c.box.y_samples}}},
                {"holds", c.holds()}};
}

Json to_json(const SolveReport& r) {
    Json assertions = Json::array();
    for (const auto& a : r.verdict.assertions)
        assertions.push_back(Json{{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    Json profile = Json::array();
    for (const auto& s : r.verdict.fiber.samples) profile.push_back(Json::array({s.t, s.value}));
    Json minima = Json::array(), maxima = Json::array();
    for (real t : r.verdict.fiber.local_minima) minima.push_back(t);
    for (real t : r.verdict.fiber.local_maxima) maxima.push_back(t);

    return Json{
        {"exploratory", r.exploratory},
        {"params", to_json(r.params)},
        {"options",
         {{"M", r.options.grid_nodes},
          {"bubble_n", r.options.bubble_n},
          {"r0", r.options.r0.value_or(r.params.R / 4)},
          {"P", r.options.path_nodes},
          {"ball_margin", r.options.ball_margin},
          {"residual_tolerance", r.options.residual_tolerance},
          {"newton_tolerance", r.options.newton_tolerance},
          {"mountain_pass_tolerance", r.options.mountain_pass_tolerance}}},
        {"regions",
         {{"in_M1", r.regions.in_M1},
          {"in_M2", r.regions.in_M2},
          {"in_M3", r.regions.in_M3},
          {"in_M4", r.regions.in_M4},
          {"geometry_case", to_string(r.regions.geometry_case)}}},
        {"S", r.S},
        {"lambda1", r.lambda1},
        {"alpha", r.alpha},
        {"rho", r.rho},
        {"c_rho", r.c_rho},
        {"residual0", residual_json(r.residual0)},
        {"norm_u0", r.norm_u0},
        {"descent_iterations", r.descent_iterations},
        {"newton_iterations0", r.newton_iterations0},
        {"T", r.T},
        {"T_min", r.T_min},
        {"c_M", r.c_M},
        {"residual_mp", residual_json(r.residual_mp)},
        {"initial_path_max", r.initial_path_max},
        {"mountain_pass_iterations", r.mountain_pass_iterations},
        {"newton_iterations_mp", r.newton_iterations_mp},
        {"stalled", r.stalled},
        {"concentration_width", r.concentration_width},
        {"grid_scale_concentration", r.grid_scale_concentration()},
        {"gap_bound", r.gap_bound},
        {"gap_ok", r.gap_ok},
        {"c_eta_scope", "least energy among the critical points computed by this run (u0, u_mp)"},
        {"assertions", assertions},
        {"g_profile",
         {{"sign_changes", r.verdict.fiber.derivative_sign_changes},
          {"local_minima", minima},
          {"local_maxima", maxima},
          {"samples", profile}}},
        {"passed", r.passed()}};
}

}  // namespace critlog
