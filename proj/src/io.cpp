#include "skelpair/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "skelpair/errors.hpp"

namespace skelpair {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open '" + path + "'", {{"path", path}});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, "'" + path + "' is not valid JSON: " + e.what(), {{"path", path}});
  }
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot write '" + path + "'", {{"path", path}});
  out << text;
  if (!out) throw Error(ErrorKind::IOError, "write to '" + path + "' failed", {{"path", path}});
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

std::string as_name(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  schema("vertex identifiers must be strings or integers");
}

Rational as_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
  schema("grid values must be \"p/q\" strings or integers");
}

Chart parse_chart_key(const std::string& key, const Graph& g, int d) {
  Chart c;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int e = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      if (e < 0 || e >= g.edge_count()) schema("chart key '" + key + "' names an unknown edge");
      c.edges.push_back(e);
    } catch (const std::logic_error&) {
      schema("bad chart key '" + key + "'");
    }
  }
  if (static_cast<int>(c.edges.size()) != d) schema("chart key '" + key + "' needs " + std::to_string(d) + " edges");
  return c;
}

json bitvecs(const std::vector<BitVec>& vs, int d) {
  json a = json::array();
  for (BitVec v : vs) a.push_back(bitvec_to_string(v, d));
  return a;
}

json partition_json(const Partition& p) {
  json a = json::array();
  for (const auto& b : p.blocks) {
    json blk = json::array();
    for (int i : b) blk.push_back(i + 1);
    a.push_back(blk);
  }
  return a;
}

}  // namespace

Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) schema("graph needs \"vertices\" and \"edges\"");
  if (!j["vertices"].is_array() || !j["edges"].is_array()) schema("graph vertices and edges must be arrays");
  std::vector<std::string> vs;
  for (const auto& v : j["vertices"]) vs.push_back(as_name(v));
  std::vector<std::pair<std::string, std::string>> es;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) schema("each edge must be a pair of vertices");
    es.emplace_back(as_name(e[0]), as_name(e[1]));
  }
  return validate_graph(vs, es);
}

json graph_to_json(const Graph& g) {
  json es = json::array();
  for (auto [a, b] : g.edges)
    es.push_back({g.vertices[static_cast<std::size_t>(a)], g.vertices[static_cast<std::size_t>(b)]});
  return {{"vertices", g.vertices}, {"edges", es}};
}

std::string chart_key(const Chart& c) {
  std::string s;
  for (int e : c.edges) s += (s.empty() ? "" : ",") + std::to_string(e);
  return s;
}

LoadedFunction function_from_json(const json& j, const Graph& g, int d) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) schema("function needs a \"type\"");
  const auto cs = charts(g, d);
  const std::string type = j["type"];
  LoadedFunction out;
  if (type == "expr") {
    Smoothness smooth = Smoothness::Cubes;
    if (j.contains("smooth")) {
      if (j["smooth"] == "cubes") smooth = Smoothness::Cubes;
      else if (j["smooth"] == "simplices") smooth = Smoothness::Simplices;
      else schema("\"smooth\" must be \"cubes\" or \"simplices\"");
    }
    if (!j.contains("charts") || !j["charts"].is_object()) schema("expr function needs a \"charts\" object");
    std::map<std::size_t, Expr> given;
    std::optional<Expr> fallback;
    for (const auto& [key, text] : j["charts"].items()) {
      if (!text.is_string()) schema("chart expressions must be strings");
      Expr e = parse_expr(text.get<std::string>(), d);
      if (key == "*") fallback = e;
      else given[chart_index(g, parse_chart_key(key, g, d))] = e;
    }
    std::vector<Expr> exprs;
    for (std::size_t c = 0; c < cs.size(); ++c) {
      if (given.count(c)) exprs.push_back(given[c]);
      else if (fallback) exprs.push_back(*fallback);
      else schema("no expression for chart " + chart_key(cs[c]));
    }
    out.expr.emplace(g, d, smooth, std::move(exprs));
  } else if (type == "grid") {
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1)
      schema("grid function needs a positive integer \"n\"");
    const int n = j["n"];
    if (!j.contains("values") || !j["values"].is_object()) schema("grid function needs a \"values\" object");
    std::vector<std::vector<Rational>> values(cs.size());
    std::vector<bool> seen(cs.size(), false);
    for (const auto& [key, arr] : j["values"].items()) {
      std::size_t c = chart_index(g, parse_chart_key(key, g, d));
      if (!arr.is_array()) schema("grid values for chart " + key + " must be an array");
      for (const auto& v : arr) values[c].push_back(as_rational(v));
      seen[c] = true;
    }
    for (std::size_t c = 0; c < cs.size(); ++c)
      if (!seen[c]) schema("no grid values for chart " + chart_key(cs[c]));
    out.grid.emplace(g, d, n, std::move(values));
  } else {
    schema("unknown function type '" + type + "'");
  }
  return out;
}

json grid_to_json(const GridFunction& f) {
  json values = json::object();
  const auto cs = charts(f.graph(), f.d());
  for (std::size_t c = 0; c < cs.size(); ++c) {
    json arr = json::array();
    for (const auto& v : f.chart_values(c)) arr.push_back(to_string(v));
    values[chart_key(cs[c])] = arr;
  }
  return {{"type", "grid"}, {"n", f.n()}, {"values", values}};
}

json number_to_json(const Number& x) {
  if (x.exact) return to_string(x.q);
  return x.x;
}

json report_to_json(const PairingReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) {
    json term = {{"tuple", bitvecs(t.tuple, r.d)},
                 {"ldeg", to_string(t.ldeg)},
                 {"integral", number_to_json(t.integral)},
                 {"contribution", number_to_json(t.contribution)}};
    term["partition"] = t.partition ? partition_json(*t.partition) : json(nullptr);
    terms.push_back(term);
  }
  return {{"value", number_to_json(r.value)}, {"terms", terms}, {"meta", r.meta}};
}

namespace {

std::vector<std::pair<std::vector<BitVec>, Rational>> sorted_multisets(const DegreeTable& t) {
  std::vector<std::pair<std::vector<BitVec>, Rational>> out;
  for (const auto& [vs, val] : t.nonzero_tuples())
    if (std::is_sorted(vs.begin(), vs.end())) out.emplace_back(vs, val);
  return out;
}

std::string joined(const std::vector<BitVec>& vs, int d) {
  std::string s;
  for (BitVec v : vs) s += (s.empty() ? "" : " ") + bitvec_to_string(v, d);
  return s;
}

}  // namespace

json fdegree_table_to_json(const DegreeTable& t) {
  json entries = json::array();
  for (const auto& [vs, val] : sorted_multisets(t))
    entries.push_back({{"multiset", bitvecs(vs, t.d())}, {"ldeg", to_string(val)}});
  return {{"d", t.d()}, {"nonzero_ordered_tuples", t.nonzero_tuples().size()}, {"entries", entries},
          {"note", "multisets not listed have F-degree 0"}};
}

std::string fdegree_table_to_csv(const DegreeTable& t) {
  std::string s = "multiset,ldeg\n";
  for (const auto& [vs, val] : sorted_multisets(t)) s += joined(vs, t.d()) + "," + to_string(val) + "\n";
  return s;
}

json monomial_table_to_json(const DegreeTable& t) {
  json entries = json::array();
  for (const auto& [m, val] : t.entries()) entries.push_back({{"monomial", bitvecs(m, t.d())}, {"ldeg", to_string(val)}});
  return {{"d", t.d()}, {"entries", entries}, {"note", "monomials with non-chain support have degree 0"}};
}

std::string monomial_table_to_csv(const DegreeTable& t) {
  std::string s = "monomial,ldeg\n";
  for (const auto& [m, val] : t.entries()) s += joined(m, t.d()) + "," + to_string(val) + "\n";
  return s;
}

json vanishing_to_json(const VanishingReport& r) {
  json vs = json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"partition", partition_json(v.partition)},
                  {"tuple", bitvecs(v.tuple, r.d)},
                  {"alpha_sum", v.alpha_sum},
                  {"ldeg", to_string(v.value)}});
  return {{"d", r.d}, {"checked", r.checked}, {"nonzero_tuples", r.nonzero_tuples}, {"violations", vs},
          {"ok", r.ok()}};
}

json convergence_to_json(const std::vector<ConvergenceRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back({{"n", r.n}, {"exact", to_string(r.exact)}, {"limit", r.limit}, {"gap", r.gap}});
  return {{"rows", a}};
}

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string s = "n,exact,limit,gap\n";
  for (const auto& r : rows)
    s += std::to_string(r.n) + "," + to_string(r.exact) + "," + format_double(r.limit) + "," + format_double(r.gap) + "\n";
  return s;
}

}  // namespace skelpair
