#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skelpair/rational.hpp"

namespace skelpair {

// A vertex of the standard cube {0,1}^d, coordinate i (0-based) in bit i.
// Printed with coordinate 1 leftmost: d=3, bits 0b001 -> "100".
using BitVec = std::uint32_t;

inline int weight(BitVec v) { return __builtin_popcount(v); }
inline int inner_parity(BitVec v, BitVec w) { return __builtin_popcount(v & w) & 1; }
std::string bitvec_to_string(BitVec v, int d);
BitVec parse_bitvec(const std::string& text);  // length gives d

struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // (tail, head), tail < head

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
};

// The standard graph I: two vertices, one edge.
Graph standard_interval();

Graph validate_graph(const std::vector<std::string>& raw_vertices,
                     const std::vector<std::pair<std::string, std::string>>& raw_edges);

struct Chart {
  std::vector<int> edges;  // gamma_1..gamma_d
  bool operator==(const Chart&) const = default;
};

// All |E|^d charts, lexicographic (coordinate 1 slowest).
std::vector<Chart> charts(const Graph& g, int d);
std::size_t chart_index(const Graph& g, const Chart& c);

// sigma is a 0-based permutation; true iff x[sigma[0]] <= x[sigma[1]] <= ...
bool simplex_membership(std::span<const double> x, std::span<const int> sigma);

// Blocks hold 0-based coordinates, sorted; blocks sorted by least element.
struct Partition {
  std::vector<std::vector<int>> blocks;

  int size() const { return static_cast<int>(blocks.size()); }
  int dim() const;
  std::vector<int> block_of() const;  // coordinate -> block index
  bool operator==(const Partition&) const = default;
  std::string to_string() const;  // 1-based, e.g. "{{1,2},{3}}"
};

inline constexpr double eps_coincide = 1e-12;

Partition point_partition(std::span<const double> x);
Partition point_partition(std::span<const Rational> x);

// Bell(d) partitions; finest first, the single block last. Guard d <= 8.
std::vector<Partition> all_partitions(int d);
Partition discrete_partition(int d);

int alpha(const Partition& p, BitVec v);

struct VertexCoord {
  int original_vertex = -1;  // >= 0 for a vertex of the input graph
  int edge = -1;             // otherwise: edge of the input graph ...
  Rational t;                // ... and the parameter on it
};

struct Subdivision {
  Graph graph;
  std::vector<VertexCoord> coords;  // per vertex of graph
  int n = 1;
};

// sd_n: sub-edge j (0..n-1) of edge e gets index e*n + j and runs
// from parameter j/n to (j+1)/n with the orientation of e.
Subdivision subdivide(const Graph& g, int n);

struct DiagonalChart {
  Partition p;
  std::vector<double> embed(std::span<const double> t) const;
  std::vector<double> project(std::span<const double> x) const;  // block representatives
};

DiagonalChart diagonal_chart(const Partition& p);

// Composition of the sub-edge and the coordinate convention:
// a point with parameter t on sub-edge e*n+j sits at (j+t)/n on edge e.
Rational subdivided_parameter(int n, int sub_edge, const Rational& t, int* edge_out);

}  // namespace skelpair
