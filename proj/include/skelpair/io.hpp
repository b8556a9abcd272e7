#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skelpair/chowring.hpp"
#include "skelpair/funcspace.hpp"
#include "skelpair/pairing.hpp"
#include "skelpair/skeleton.hpp"

namespace skelpair {

using nlohmann::json;

json read_json_file(const std::string& path);
// "-" or empty path means stdout; IOError on failure
void write_text(const std::string& text, const std::string& path);
// byte-stable: sorted keys, two-space indent, trailing newline
std::string dump(const json& j);

Graph graph_from_json(const json& j);
json graph_to_json(const Graph& g);

struct LoadedFunction {
  std::optional<GridFunction> grid;
  std::optional<ExprFunction> expr;
};

// chart keys are 0-based edge indices joined by ","; "*" is the default
LoadedFunction function_from_json(const json& j, const Graph& g, int d);
json grid_to_json(const GridFunction& f);
std::string chart_key(const Chart& c);

json number_to_json(const Number& x);
json report_to_json(const PairingReport& r);
json fdegree_table_to_json(const DegreeTable& t);
std::string fdegree_table_to_csv(const DegreeTable& t);
json monomial_table_to_json(const DegreeTable& t);
std::string monomial_table_to_csv(const DegreeTable& t);
json vanishing_to_json(const VanishingReport& r);
json convergence_to_json(const std::vector<ConvergenceRow>& rows);
std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows);
std::string format_double(double x);  // %.17g, '.' decimal point

}  // namespace skelpair
