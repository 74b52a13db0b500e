#pragma once

#include "critlog/bubbles.hpp"
#include "critlog/inequalities.hpp"
#include "critlog/regions.hpp"
#include "critlog/solvers.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace critlog {

/// Insertion-ordered JSON with long double numbers (parsed with strtold).
using Json = nlohmann::basic_json<nlohmann::ordered_map, std::vector, std::string, bool, std::int64_t, std::uint64_t,
                                  real>;

/// Shortest fixed format that round-trips a long double: %.21Lg.
std::string format_real(real x);

/// Deterministic JSON text: two-space indent, keys in insertion order,
/// floats via format_real, non-finite floats as null.
std::string dump_json(const Json& j);

/// Parses JSON text; throws precondition_error with the parser message.
Json parse_json(const std::string& text);

/// "r,value" with a header line, one row per stored node.
void write_grid_function_csv(std::ostream& os, const RadialGrid& g, const GridFunction& u);

struct SampledProfile {
    std::vector<real> r;
    GridFunction u;
};

SampledProfile read_grid_function_csv(std::istream& is);

struct PathRow {
    std::size_t node_index;
    real t;
    real energy;
};

/// "node_index,t,energy" where t is the normalized arc-length parameter.
void write_path_csv(std::ostream& os, const PathState& path);
std::vector<PathRow> read_path_csv(std::istream& is);

struct SlopeRow {
    std::string quantity;  // norm_p, gradient_gap or critical_gap
    int N;
    real p;
    real slope;
    real intercept;
    real residual;
    real expected;
    bool log_corrected;
    bool ok;
};

void write_slopes_csv(std::ostream& os, const std::vector<SlopeRow>& rows);
std::vector<SlopeRow> read_slopes_csv(std::istream& is);

Json to_json(const ProblemParams& p);
Json to_json(const RegionReport& r, const RegionValues& v);
Json to_json(const Certificate& c);
Json to_json(const SolveReport& r);

/// Splits one CSV line on commas (no quoting; fields never contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

/// strtold on the whole field; throws precondition_error otherwise.
real parse_real(const std::string& field);

}  // namespace critlog
