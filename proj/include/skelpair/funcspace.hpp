#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skelpair/expr.hpp"
#include "skelpair/rational.hpp"
#include "skelpair/skeleton.hpp"

namespace skelpair {

enum class Smoothness { Cubes, Simplices };

// Piecewise-affine function on sd_n(G)^d: exact values at lattice vertices,
// one (n+1)^d array per chart (chart order of charts(), last index fastest).
class GridFunction {
 public:
  GridFunction(Graph g, int d, int n, std::vector<std::vector<Rational>> values);

  // Evaluates `value(chart, idx)` once per global lattice vertex.
  static GridFunction tabulate(const Graph& g, int d, int n,
                               const std::function<Rational(std::size_t, std::span<const int>)>& value);

  const Graph& graph() const { return graph_; }
  int d() const { return d_; }
  int n() const { return n_; }
  std::size_t chart_count() const { return values_.size(); }
  const std::vector<Rational>& chart_values(std::size_t chart) const { return values_[chart]; }
  const Rational& at(std::size_t chart, std::span<const int> idx) const;
  // piecewise-affine interpolation at a rational point of the chart
  Rational value_at(std::size_t chart, std::span<const Rational> x) const;

  bool operator==(const GridFunction& o) const {
    return d_ == o.d_ && n_ == o.n_ && values_ == o.values_ && graph_.vertices == o.graph_.vertices &&
           graph_.edges == o.graph_.edges;
  }

 private:
  Graph graph_;
  int d_, n_;
  std::vector<std::vector<Rational>> values_;
};

GridFunction scale(const GridFunction& f, const Rational& c);
GridFunction add(const GridFunction& f, const GridFunction& g);

class ExprFunction {
 public:
  ExprFunction(Graph g, int d, Smoothness smooth, std::vector<Expr> chart_exprs);
  static ExprFunction uniform(const Graph& g, int d, Smoothness smooth, const std::string& text);

  const Graph& graph() const { return graph_; }
  int d() const { return d_; }
  Smoothness smoothness() const { return smooth_; }
  std::size_t chart_count() const { return exprs_.size(); }
  const Expr& expr(std::size_t chart) const { return exprs_[chart]; }
  double eval(std::size_t chart, std::span<const double> x) const;

  // chart-face disagreements beyond 1e-9 (16 samples per shared face)
  std::vector<std::string> continuity_warnings() const;

 private:
  Graph graph_;
  int d_;
  Smoothness smooth_;
  std::vector<Expr> exprs_;
};

double evaluate(const ExprFunction& f, const Chart& chart, std::span<const double> x);

// Values at i/n; exact for expressions without transcendental nodes,
// otherwise the double rounded to denominator 2^53.
GridFunction standard_approximation(const ExprFunction& f, int n);
// Same construction for a piecewise-affine input (a projection at its own level).
GridFunction standard_approximation(const GridFunction& f, int n);
inline GridFunction refine(const GridFunction& f, int k) { return standard_approximation(f, f.n() * k); }

// Level n*k grid on G -> level n grid on sd_k(G) (same function).
GridFunction rebase(const GridFunction& f, int k);

using PointFunction = std::function<double(std::span<const double>)>;

// (1/2^d) sum_w (-1)^<v,w> f(x + h^w), h^w_j = +h for w_j = 0, -h for w_j = 1.
double fourier_delta(const PointFunction& f, std::span<const double> x, BitVec v, double h);
// all 2^d values at once, indexed by v
std::vector<double> fourier_deltas(const PointFunction& f, std::span<const double> x, double h);

struct LatticePoint {
  std::size_t chart = 0;
  std::vector<int> cell;  // in {0..level-1}^d
  int level = 1;
  std::vector<double> center() const;
};

Rational lattice_delta(const GridFunction& f, const LatticePoint& p, BitVec v);
std::vector<Rational> lattice_deltas(const GridFunction& f, std::size_t chart, std::span<const int> cell);
double lattice_delta(const ExprFunction& f, const LatticePoint& p, BitVec v);

struct DifferentialOptions {
  double h_max = 1.0 / 16;
  int levels = 4;  // L: steps h0/2^k, k = 0..L
  double h_min = 1e-5;
};

struct Differential {
  double value = 0;
  double residual = 0;
  double h0 = 0;
};

// lim h^-a Delta_h^v f(x) by Richardson extrapolation.
Differential generalized_differential(const ExprFunction& f, std::size_t chart, std::span<const double> x,
                                      BitVec v, int a, const DifferentialOptions& opt = {});
// every v at once; a[v] gives the degree per v
std::vector<Differential> generalized_differentials(const ExprFunction& f, std::size_t chart,
                                                    std::span<const double> x, std::span<const int> a,
                                                    const DifferentialOptions& opt = {});

// Zhang's delta(f)(x) = 2 D^{(1,1)}_1 f(x) on the diagonal, d = 2
Differential zhang_delta(const ExprFunction& f, std::size_t chart, std::span<const double> x,
                         const DifferentialOptions& opt = {});

struct GridFactor {
  const GridFunction* f;
  BitVec v;
};

// sum over charts and cells of prod lattice_delta, times n^-d
Rational integrate_grid_product(const std::vector<GridFactor>& factors, int n);

// integrand(d-chart index, point of [0,1]^d on the diagonal)
using DiagonalIntegrand = std::function<double(std::size_t, std::span<const double>)>;

// Composite midpoint rule on [0,1]^{|p|} per diagonal chart. With
// split_simplices, cells in which blocks on one edge share a cell index are
// cut into order simplices (evaluated at their centroids), so no sample
// lands on a coarser diagonal.
double integrate_diagonal(const Graph& g, int d, const Partition& p, const DiagonalIntegrand& integrand, int m,
                          bool split_simplices = false);

// Same rule for several integrands sharing the sample points.
using MultiIntegrand = std::function<std::vector<double>(std::size_t, std::span<const double>)>;
std::vector<double> integrate_diagonal_multi(const Graph& g, int d, const Partition& p,
                                             const MultiIntegrand& integrand, std::size_t outputs, int m,
                                             bool split_simplices = false);

}  // namespace skelpair
