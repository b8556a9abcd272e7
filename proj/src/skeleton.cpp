#include "skelpair/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "skelpair/errors.hpp"

namespace skelpair {

std::string bitvec_to_string(BitVec v, int d) {
  std::string s(static_cast<std::size_t>(d), '0');
  for (int i = 0; i < d; ++i)
    if ((v >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

BitVec parse_bitvec(const std::string& text) {
  if (text.empty() || text.size() > 16)
    throw Error(ErrorKind::InvalidArgument, "bad bit vector '" + text + "'");
  BitVec v = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') v |= 1u << i;
    else if (text[i] != '0') throw Error(ErrorKind::InvalidArgument, "bad bit vector '" + text + "'");
  }
  return v;
}

int Graph::index_of(const std::string& name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

Graph standard_interval() { return validate_graph({"0", "1"}, {{"0", "1"}}); }

Graph validate_graph(const std::vector<std::string>& raw_vertices,
                     const std::vector<std::pair<std::string, std::string>>& raw_edges) {
  if (raw_vertices.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no vertices");
  if (raw_edges.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no edges");
  Graph g;
  std::map<std::string, int> index;
  for (const auto& v : raw_vertices) {
    if (!index.emplace(v, static_cast<int>(g.vertices.size())).second)
      throw Error(ErrorKind::DuplicateVertex, "duplicate vertex '" + v + "'", {{"vertex", v}});
    g.vertices.push_back(v);
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : raw_edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end())
      throw Error(ErrorKind::UnknownVertex, "edge uses unknown vertex '" + a + "'", {{"vertex", a}});
    if (ib == index.end())
      throw Error(ErrorKind::UnknownVertex, "edge uses unknown vertex '" + b + "'", {{"vertex", b}});
    if (ia->second == ib->second)
      throw Error(ErrorKind::SelfLoop, "self-loop at '" + a + "'", {{"vertex", a}});
    std::pair<int, int> e{std::min(ia->second, ib->second), std::max(ia->second, ib->second)};
    if (!seen.insert(e).second)
      throw Error(ErrorKind::ParallelEdge, "parallel edge between '" + a + "' and '" + b + "'",
                  {{"edge", a + "," + b}});
    g.edges.push_back(e);
  }
  return g;
}

std::vector<Chart> charts(const Graph& g, int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  std::vector<Chart> out;
  Chart c;
  c.edges.assign(static_cast<std::size_t>(d), 0);
  const int E = g.edge_count();
  for (;;) {
    out.push_back(c);
    int j = d - 1;
    while (j >= 0 && ++c.edges[static_cast<std::size_t>(j)] == E) c.edges[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return out;
}

std::size_t chart_index(const Graph& g, const Chart& c) {
  std::size_t idx = 0;
  for (int e : c.edges) idx = idx * static_cast<std::size_t>(g.edge_count()) + static_cast<std::size_t>(e);
  return idx;
}

bool simplex_membership(std::span<const double> x, std::span<const int> sigma) {
  for (std::size_t k = 1; k < sigma.size(); ++k)
    if (x[static_cast<std::size_t>(sigma[k - 1])] > x[static_cast<std::size_t>(sigma[k])]) return false;
  return true;
}

int Partition::dim() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

std::vector<int> Partition::block_of() const {
  std::vector<int> out(static_cast<std::size_t>(dim()), -1);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (int a : blocks[j]) out[static_cast<std::size_t>(a)] = static_cast<int>(j);
  return out;
}

std::string Partition::to_string() const {
  std::string s = "{";
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j) s += ",";
    s += "{";
    for (std::size_t k = 0; k < blocks[j].size(); ++k) {
      if (k) s += ",";
      s += std::to_string(blocks[j][k] + 1);
    }
    s += "}";
  }
  return s + "}";
}

namespace {

// labels[i] = group of coordinate i, groups numbered by first occurrence
Partition from_labels(const std::vector<int>& labels) {
  Partition p;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto j = static_cast<std::size_t>(labels[i]);
    if (j >= p.blocks.size()) p.blocks.resize(j + 1);
    p.blocks[j].push_back(static_cast<int>(i));
  }
  return p;
}

template <class T, class Eq>
Partition group_equal(std::span<const T> x, Eq eq) {
  std::vector<int> labels(x.size());
  int next = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    labels[i] = -1;
    for (std::size_t k = 0; k < i; ++k)
      if (eq(x[i], x[k])) {
        labels[i] = labels[k];
        break;
      }
    if (labels[i] < 0) labels[i] = next++;
  }
  return from_labels(labels);
}

}  // namespace

Partition point_partition(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0 && x[i] < 1.0))
      throw Error(ErrorKind::NotInner, "coordinate " + std::to_string(i + 1) + " is not in (0,1)");
  return group_equal<double>(x, [](double a, double b) { return std::fabs(a - b) <= eps_coincide; });
}

Partition point_partition(std::span<const Rational> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= 0 || x[i] >= 1)
      throw Error(ErrorKind::NotInner, "coordinate " + std::to_string(i + 1) + " is not in (0,1)");
  return group_equal<Rational>(x, [](const Rational& a, const Rational& b) { return a == b; });
}

std::vector<Partition> all_partitions(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  if (d > 8) throw Error(ErrorKind::TooLarge, "partition enumeration is guarded at d <= 8");
  // restricted growth strings in lexicographic order, reversed at the end
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == d) {
      out.push_back(from_labels(rgs));
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      rgs[static_cast<std::size_t>(pos)] = l;
      rec(pos + 1, std::max(max_label, l));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  std::reverse(out.begin(), out.end());
  return out;
}

Partition discrete_partition(int d) {
  Partition p;
  for (int i = 0; i < d; ++i) p.blocks.push_back({i});
  return p;
}

int alpha(const Partition& p, BitVec v) {
  int a = 0;
  for (const auto& b : p.blocks)
    for (int i : b)
      if ((v >> i) & 1u) {
        ++a;
        break;
      }
  return a;
}

Subdivision subdivide(const Graph& g, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "subdivision level must be positive");
  // sort keys: original vertex v -> (v, 0, 0, 0); i-th interior point of
  // edge e=(a,b) -> (a, 1, e, i). Keeps every sub-edge oriented like e.
  struct Item {
    std::tuple<int, int, int, int> key;
    VertexCoord coord;
    std::string name;
  };
  std::vector<Item> items;
  for (int v = 0; v < g.vertex_count(); ++v) {
    VertexCoord c;
    c.original_vertex = v;
    items.push_back({{v, 0, 0, 0}, c, g.vertices[static_cast<std::size_t>(v)]});
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    for (int i = 1; i < n; ++i) {
      VertexCoord c;
      c.edge = e;
      c.t = Rational(i, n);
      c.t.canonicalize();
      items.push_back({{a, 1, e, i}, c,
                       g.vertices[static_cast<std::size_t>(a)] + ">" + g.vertices[static_cast<std::size_t>(b)] +
                           "#" + std::to_string(i) + "/" + std::to_string(n)});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.key < y.key; });

  std::vector<std::string> names;
  Subdivision sd;
  sd.n = n;
  std::map<std::pair<int, int>, int> interior_index;  // (edge, i) -> new index
  std::vector<int> original_index(static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t k = 0; k < items.size(); ++k) {
    names.push_back(items[k].name);
    sd.coords.push_back(items[k].coord);
    const auto& c = items[k].coord;
    if (c.original_vertex >= 0) original_index[static_cast<std::size_t>(c.original_vertex)] = static_cast<int>(k);
    else interior_index[{c.edge, std::get<3>(items[k].key)}] = static_cast<int>(k);
  }
  auto point = [&](int e, int i) {
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    if (i == 0) return original_index[static_cast<std::size_t>(a)];
    if (i == n) return original_index[static_cast<std::size_t>(b)];
    return interior_index.at({e, i});
  };
  std::vector<std::pair<std::string, std::string>> edges;
  for (int e = 0; e < g.edge_count(); ++e)
    for (int j = 0; j < n; ++j)
      edges.emplace_back(names[static_cast<std::size_t>(point(e, j))], names[static_cast<std::size_t>(point(e, j + 1))]);
  sd.graph = validate_graph(names, edges);
  return sd;
}

Rational subdivided_parameter(int n, int sub_edge, const Rational& t, int* edge_out) {
  if (edge_out) *edge_out = sub_edge / n;
  Rational r = (Rational(sub_edge % n) + t) / n;
  r.canonicalize();
  return r;
}

std::vector<double> DiagonalChart::embed(std::span<const double> t) const {
  std::vector<double> x(static_cast<std::size_t>(p.dim()));
  for (std::size_t j = 0; j < p.blocks.size(); ++j)
    for (int a : p.blocks[j]) x[static_cast<std::size_t>(a)] = t[j];
  return x;
}

std::vector<double> DiagonalChart::project(std::span<const double> x) const {
  std::vector<double> t;
  for (const auto& b : p.blocks) t.push_back(x[static_cast<std::size_t>(b.front())]);
  return t;
}

DiagonalChart diagonal_chart(const Partition& p) { return DiagonalChart{p}; }

}  // namespace skelpair
