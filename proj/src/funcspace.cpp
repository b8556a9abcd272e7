#include "skelpair/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "skelpair/errors.hpp"
#include "skelpair/parallel.hpp"

namespace skelpair {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// flat index -> multi-index in {0..base-1}^d, last index fastest
void unflatten(std::size_t flat, int base, std::vector<int>& idx) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    idx[j] = static_cast<int>(flat % static_cast<std::size_t>(base));
    flat /= static_cast<std::size_t>(base);
  }
}

std::size_t flatten(std::span<const int> idx, int base) {
  std::size_t flat = 0;
  for (int i : idx) flat = flat * static_cast<std::size_t>(base) + static_cast<std::size_t>(i);
  return flat;
}

// key of the lattice vertex (chart, idx) in sd_n(G)^d, shared across charts
struct LatticeKeyer {
  const Graph& g;
  const std::vector<Chart>& cs;
  int n;
  std::uint64_t base;
  LatticeKeyer(const Graph& graph, const std::vector<Chart>& charts_, int level)
      : g(graph), cs(charts_), n(level),
        base(static_cast<std::uint64_t>(graph.vertex_count()) +
             static_cast<std::uint64_t>(graph.edge_count()) * static_cast<std::uint64_t>(level - 1)) {}
  std::uint64_t operator()(std::size_t chart, std::span<const int> idx) const {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      int e = cs[chart].edges[j];
      auto [tail, head] = g.edges[static_cast<std::size_t>(e)];
      std::uint64_t k;
      if (idx[j] == 0) k = static_cast<std::uint64_t>(tail);
      else if (idx[j] == n) k = static_cast<std::uint64_t>(head);
      else
        k = static_cast<std::uint64_t>(g.vertex_count()) + static_cast<std::uint64_t>(e) * static_cast<std::uint64_t>(n - 1) +
            static_cast<std::uint64_t>(idx[j] - 1);
      key = key * base + k;
    }
    return key;
  }
};

void in_place_wht(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        double x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
}

void in_place_wht(std::vector<Rational>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        Rational x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
}

}  // namespace

// ---- GridFunction -----------------------------------------------------------

GridFunction::GridFunction(Graph g, int d, int n, std::vector<std::vector<Rational>> values)
    : graph_(std::move(g)), d_(d), n_(n), values_(std::move(values)) {
  if (d_ < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  if (n_ < 1) throw Error(ErrorKind::InvalidArgument, "grid level must be positive");
  const auto cs = charts(graph_, d_);
  if (values_.size() != cs.size())
    throw Error(ErrorKind::SchemaError, "expected " + std::to_string(cs.size()) + " charts, got " +
                                            std::to_string(values_.size()));
  const std::size_t per_chart = ipow(static_cast<std::size_t>(n_ + 1), d_);
  for (std::size_t c = 0; c < values_.size(); ++c)
    if (values_[c].size() != per_chart)
      throw Error(ErrorKind::SchemaError, "chart " + std::to_string(c) + " needs " + std::to_string(per_chart) +
                                              " values, got " + std::to_string(values_[c].size()));
  if (cs.size() == 1) return;
  LatticeKeyer key(graph_, cs, n_);
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> first;
  std::vector<int> idx(static_cast<std::size_t>(d_));
  for (std::size_t c = 0; c < cs.size(); ++c)
    for (std::size_t flat = 0; flat < per_chart; ++flat) {
      unflatten(flat, n_ + 1, idx);
      auto [it, fresh] = first.emplace(key(c, idx), std::make_pair(c, flat));
      if (!fresh && values_[it->second.first][it->second.second] != values_[c][flat]) {
        std::string where;
        for (int i : idx) where += (where.empty() ? "" : ",") + std::to_string(i);
        throw Error(ErrorKind::GluingMismatch,
                    "charts " + std::to_string(it->second.first) + " and " + std::to_string(c) +
                        " disagree on a shared lattice vertex",
                    {{"chart", std::to_string(c)}, {"index", where}});
      }
    }
}

GridFunction GridFunction::tabulate(const Graph& g, int d, int n,
                                    const std::function<Rational(std::size_t, std::span<const int>)>& value) {
  const auto cs = charts(g, d);
  const std::size_t per_chart = ipow(static_cast<std::size_t>(n + 1), d);
  LatticeKeyer key(g, cs, n);
  std::unordered_map<std::uint64_t, Rational> cache;
  std::vector<std::vector<Rational>> values(cs.size(), std::vector<Rational>(per_chart));
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < cs.size(); ++c)
    for (std::size_t flat = 0; flat < per_chart; ++flat) {
      unflatten(flat, n + 1, idx);
      if (cs.size() == 1) {
        values[c][flat] = value(c, idx);
        continue;
      }
      auto k = key(c, idx);
      auto it = cache.find(k);
      if (it == cache.end()) it = cache.emplace(k, value(c, idx)).first;
      values[c][flat] = it->second;
    }
  return GridFunction(g, d, n, std::move(values));
}

const Rational& GridFunction::at(std::size_t chart, std::span<const int> idx) const {
  return values_[chart][flatten(idx, n_ + 1)];
}

// Kuhn triangulation: inside a cell, the simplex is fixed by sorting the
// fractional parts in decreasing order.
Rational GridFunction::value_at(std::size_t chart, std::span<const Rational> x) const {
  const auto D = static_cast<std::size_t>(d_);
  std::vector<int> cell(D);
  std::vector<Rational> frac(D);
  for (std::size_t j = 0; j < D; ++j) {
    if (x[j] < 0 || x[j] > 1) throw Error(ErrorKind::OutOfRange, "point outside the chart");
    Rational y = x[j] * n_;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    long c = fl.get_si();
    if (c >= n_) c = n_ - 1;
    cell[j] = static_cast<int>(c);
    frac[j] = y - c;
  }
  std::vector<std::size_t> order(D);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  std::vector<int> corner = cell;
  Rational result = (1 - frac[order[0]]) * at(chart, corner);
  for (std::size_t k = 0; k < D; ++k) {
    corner[order[k]] += 1;
    Rational next = k + 1 < D ? frac[order[k + 1]] : Rational(0);
    result += (frac[order[k]] - next) * at(chart, corner);
  }
  result.canonicalize();
  return result;
}

GridFunction scale(const GridFunction& f, const Rational& c) {
  std::vector<std::vector<Rational>> values;
  for (std::size_t k = 0; k < f.chart_count(); ++k) {
    values.push_back(f.chart_values(k));
    for (auto& v : values.back()) v *= c;
  }
  return GridFunction(f.graph(), f.d(), f.n(), std::move(values));
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  if (f.n() != g.n() || f.d() != g.d() || f.chart_count() != g.chart_count())
    throw Error(ErrorKind::LevelMismatch, "grids differ in level, dimension or graph");
  std::vector<std::vector<Rational>> values;
  for (std::size_t k = 0; k < f.chart_count(); ++k) {
    values.push_back(f.chart_values(k));
    for (std::size_t i = 0; i < values.back().size(); ++i) values.back()[i] += g.chart_values(k)[i];
  }
  return GridFunction(f.graph(), f.d(), f.n(), std::move(values));
}

// ---- ExprFunction -------------------------------------------------------------

ExprFunction::ExprFunction(Graph g, int d, Smoothness smooth, std::vector<Expr> chart_exprs)
    : graph_(std::move(g)), d_(d), smooth_(smooth), exprs_(std::move(chart_exprs)) {
  const std::size_t expected = charts(graph_, d_).size();
  if (exprs_.size() != expected)
    throw Error(ErrorKind::SchemaError, "expected " + std::to_string(expected) + " chart expressions");
  for (const auto& e : exprs_)
    if (e.max_var() > d_)
      throw Error(ErrorKind::UnknownIdentifier, "expression uses x" + std::to_string(e.max_var()) + " with d=" +
                                                    std::to_string(d_),
                  {{"identifier", "x" + std::to_string(e.max_var())}});
}

ExprFunction ExprFunction::uniform(const Graph& g, int d, Smoothness smooth, const std::string& text) {
  Expr e = parse_expr(text, d);
  return ExprFunction(g, d, smooth, std::vector<Expr>(charts(g, d).size(), e));
}

double ExprFunction::eval(std::size_t chart, std::span<const double> x) const { return exprs_[chart].eval(x); }

double evaluate(const ExprFunction& f, const Chart& chart, std::span<const double> x) {
  for (int e : chart.edges)
    if (e < 0 || e >= f.graph().edge_count()) throw Error(ErrorKind::InvalidArgument, "chart not on this graph");
  return f.eval(chart_index(f.graph(), chart), x);
}

std::vector<std::string> ExprFunction::continuity_warnings() const {
  std::vector<std::string> out;
  const auto cs = charts(graph_, d_);
  const auto D = static_cast<std::size_t>(d_);
  for (std::size_t c = 0; c < cs.size(); ++c)
    for (std::size_t j = 0; j < D; ++j)
      for (int side = 0; side < 2; ++side) {
        auto [tail, head] = graph_.edges[static_cast<std::size_t>(cs[c].edges[j])];
        int u = side ? head : tail;
        for (int e2 = 0; e2 < graph_.edge_count(); ++e2) {
          if (e2 == cs[c].edges[j]) continue;
          auto [t2, h2] = graph_.edges[static_cast<std::size_t>(e2)];
          if (t2 != u && h2 != u) continue;
          Chart other = cs[c];
          other.edges[j] = e2;
          std::size_t c2 = chart_index(graph_, other);
          if (c2 < c) continue;  // each pair once
          double worst = 0;
          std::vector<double> x(D), y(D);
          for (int k = 0; k < 16; ++k) {
            for (std::size_t i = 0; i < D; ++i) {
              double s = std::fmod((k + 0.5) * (0.6180339887498949 + 0.1 * static_cast<double>(i)), 1.0);
              x[i] = y[i] = s;
            }
            x[j] = side;
            y[j] = (h2 == u) ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(eval(c, x) - eval(c2, y)));
          }
          if (worst > 1e-9) {
            std::ostringstream msg;
            msg << "charts " << c << " and " << c2 << " differ by " << worst << " on the face through vertex "
                << graph_.vertices[static_cast<std::size_t>(u)];
            out.push_back(msg.str());
          }
        }
      }
  return out;
}

GridFunction standard_approximation(const ExprFunction& f, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  const auto D = static_cast<std::size_t>(f.d());
  return GridFunction::tabulate(f.graph(), f.d(), n, [&](std::size_t chart, std::span<const int> idx) {
    const Expr& e = f.expr(chart);
    if (e.is_rational()) {
      std::vector<Rational> x(D);
      for (std::size_t j = 0; j < D; ++j) {
        x[j] = Rational(idx[j], n);
        x[j].canonicalize();
      }
      return e.eval_exact(x);
    }
    std::vector<double> x(D);
    for (std::size_t j = 0; j < D; ++j) x[j] = static_cast<double>(idx[j]) / n;
    return dyadic_round(e.eval(x));
  });
}

GridFunction standard_approximation(const GridFunction& f, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  if (n == f.n()) return f;
  const auto D = static_cast<std::size_t>(f.d());
  return GridFunction::tabulate(f.graph(), f.d(), n, [&](std::size_t chart, std::span<const int> idx) {
    std::vector<Rational> x(D);
    for (std::size_t j = 0; j < D; ++j) {
      x[j] = Rational(idx[j], n);
      x[j].canonicalize();
    }
    return f.value_at(chart, x);
  });
}

GridFunction rebase(const GridFunction& f, int k) {
  if (k < 1 || f.n() % k != 0)
    throw Error(ErrorKind::LevelMismatch, "grid level " + std::to_string(f.n()) + " is not a multiple of " +
                                              std::to_string(k));
  const int n = f.n() / k;
  const Subdivision sd = subdivide(f.graph(), k);
  const auto sd_charts = charts(sd.graph, f.d());
  const auto D = static_cast<std::size_t>(f.d());
  return GridFunction::tabulate(sd.graph, f.d(), n, [&](std::size_t chart, std::span<const int> idx) {
    Chart base;
    std::vector<int> fine(D);
    for (std::size_t j = 0; j < D; ++j) {
      int sub = sd_charts[chart].edges[j];
      base.edges.push_back(sub / k);
      fine[j] = (sub % k) * n + idx[j];
    }
    return f.at(chart_index(f.graph(), base), fine);
  });
}

// ---- differences --------------------------------------------------------------

std::vector<double> fourier_deltas(const PointFunction& f, std::span<const double> x, double h) {
  const std::size_t D = x.size();
  const std::size_t corners = std::size_t{1} << D;
  std::vector<double> vals(corners);
  std::vector<double> y(D);
  for (std::size_t w = 0; w < corners; ++w) {
    for (std::size_t j = 0; j < D; ++j) {
      y[j] = ((w >> j) & 1u) ? x[j] - h : x[j] + h;
      if (y[j] < 0.0 || y[j] > 1.0)
        throw Error(ErrorKind::OutOfRange, "difference cube leaves the chart",
                    {{"coordinate", std::to_string(j + 1)}});
    }
    vals[w] = f(y);
  }
  in_place_wht(vals);
  for (auto& v : vals) v /= static_cast<double>(corners);
  return vals;
}

double fourier_delta(const PointFunction& f, std::span<const double> x, BitVec v, double h) {
  return fourier_deltas(f, x, h)[v];
}

std::vector<double> LatticePoint::center() const {
  std::vector<double> c;
  for (int i : cell) c.push_back((i + 0.5) / level);
  return c;
}

std::vector<Rational> lattice_deltas(const GridFunction& f, std::size_t chart, std::span<const int> cell) {
  const std::size_t D = cell.size();
  const std::size_t corners = std::size_t{1} << D;
  std::vector<Rational> vals(corners);
  std::vector<int> corner(D);
  for (std::size_t w = 0; w < corners; ++w) {
    for (std::size_t j = 0; j < D; ++j) corner[j] = cell[j] + 1 - static_cast<int>((w >> j) & 1u);
    vals[w] = f.at(chart, corner);
  }
  in_place_wht(vals);
  for (auto& v : vals) v /= static_cast<long>(corners);
  return vals;
}

Rational lattice_delta(const GridFunction& f, const LatticePoint& p, BitVec v) {
  if (p.level != f.n())
    throw Error(ErrorKind::LevelMismatch, "lattice point at level " + std::to_string(p.level) + ", grid at level " +
                                              std::to_string(f.n()));
  if (static_cast<int>(p.cell.size()) != f.d() || p.chart >= f.chart_count())
    throw Error(ErrorKind::InvalidArgument, "lattice point does not fit the grid");
  for (int c : p.cell)
    if (c < 0 || c >= p.level) throw Error(ErrorKind::OutOfRange, "cell index outside 0..n-1");
  return lattice_deltas(f, p.chart, p.cell)[v];
}

double lattice_delta(const ExprFunction& f, const LatticePoint& p, BitVec v) {
  auto fn = [&](std::span<const double> y) { return f.eval(p.chart, y); };
  return fourier_delta(fn, p.center(), v, 0.5 / p.level);
}

// ---- generalized differentials ----------------------------------------------------

std::vector<Differential> generalized_differentials(const ExprFunction& f, std::size_t chart,
                                                    std::span<const double> x, std::span<const int> a,
                                                    const DifferentialOptions& opt) {
  const std::size_t D = x.size();
  const std::size_t count = std::size_t{1} << D;
  if (a.size() != count) throw Error(ErrorKind::InvalidArgument, "need one degree per bit vector");
  const Partition part = point_partition(x);
  const auto block = part.block_of();
  const bool simplices = f.smoothness() == Smoothness::Simplices;

  double radius = 1.0;
  for (std::size_t i = 0; i < D; ++i) radius = std::min({radius, x[i], 1.0 - x[i]});
  if (simplices)
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = i + 1; j < D; ++j)
        if (block[i] != block[j]) radius = std::min(radius, 0.25 * std::fabs(x[i] - x[j]));
  const double h0 = std::min(opt.h_max, 0.5 * radius);
  if (h0 < opt.h_min)
    throw Error(ErrorKind::DegenerateRadius, "point too close to another stratum or the chart boundary",
                {{"h0", std::to_string(h0)}});
  const bool coincident = simplices && part.size() < static_cast<int>(D);
  const int L = opt.levels;

  auto fn = [&](std::span<const double> y) { return f.eval(chart, y); };
  std::vector<std::vector<double>> first(static_cast<std::size_t>(L + 1));
  for (int k = 0; k <= L; ++k) {
    double h = h0 / static_cast<double>(1 << k);
    auto deltas = fourier_deltas(fn, x, h);
    for (std::size_t v = 0; v < count; ++v) deltas[v] /= std::pow(h, a[v]);
    first[static_cast<std::size_t>(k)] = std::move(deltas);
  }

  std::vector<Differential> out(count);
  std::vector<double> col(static_cast<std::size_t>(L + 1)), prev;
  for (std::size_t v = 0; v < count; ++v) {
    const int q = weight(static_cast<BitVec>(v)) - a[v];
    for (int k = 0; k <= L; ++k) col[static_cast<std::size_t>(k)] = first[static_cast<std::size_t>(k)][v];
    double last_two[2] = {col[static_cast<std::size_t>(L)], col[static_cast<std::size_t>(L)]};
    for (int j = 1; j <= L; ++j) {
      // error exponents: generic powers of h at a coincident point of a
      // simplex-smooth f, otherwise the even expansion shifted by q
      int p = coincident ? j : (q <= 0 ? 2 * j : q + 2 * (j - 1));
      double factor = std::ldexp(1.0, p) - 1.0;
      prev = col;
      for (int k = L; k >= j; --k)
        col[static_cast<std::size_t>(k)] =
            prev[static_cast<std::size_t>(k)] +
            (prev[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k - 1)]) / factor;
      last_two[0] = prev[static_cast<std::size_t>(L)];
      last_two[1] = col[static_cast<std::size_t>(L)];
    }
    out[v] = {last_two[1], std::fabs(last_two[1] - last_two[0]), h0};
  }
  return out;
}

Differential generalized_differential(const ExprFunction& f, std::size_t chart, std::span<const double> x,
                                      BitVec v, int a, const DifferentialOptions& opt) {
  const std::size_t count = std::size_t{1} << x.size();
  if (v >= count) throw Error(ErrorKind::InvalidArgument, "bit vector longer than d");
  std::vector<int> degrees(count, 0);
  for (std::size_t w = 0; w < count; ++w) degrees[w] = weight(static_cast<BitVec>(w));
  degrees[v] = a;
  return generalized_differentials(f, chart, x, degrees, opt)[v];
}

Differential zhang_delta(const ExprFunction& f, std::size_t chart, std::span<const double> x,
                         const DifferentialOptions& opt) {
  if (f.d() != 2 || x.size() != 2) throw Error(ErrorKind::InvalidArgument, "zhang_delta needs d = 2");
  Differential r = generalized_differential(f, chart, x, 3, 1, opt);
  r.value *= 2;
  r.residual *= 2;
  return r;
}

// ---- integrals ----------------------------------------------------------------

Rational integrate_grid_product(const std::vector<GridFactor>& factors, int n) {
  if (factors.empty()) throw Error(ErrorKind::InvalidArgument, "no factors");
  const GridFunction& g0 = *factors.front().f;
  for (const auto& fac : factors) {
    if (fac.f->n() != n)
      throw Error(ErrorKind::LevelMismatch, "factor at level " + std::to_string(fac.f->n()) + ", expected " +
                                                std::to_string(n));
    if (fac.f->d() != g0.d() || fac.f->chart_count() != g0.chart_count())
      throw Error(ErrorKind::LevelMismatch, "factors live on different products");
  }
  const int d = g0.d();
  const std::size_t cells = ipow(static_cast<std::size_t>(n), d);
  Rational total = 0;
  std::vector<int> cell(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < g0.chart_count(); ++c)
    for (std::size_t flat = 0; flat < cells; ++flat) {
      unflatten(flat, n, cell);
      Rational prod = 1;
      for (const auto& fac : factors) {
        prod *= lattice_deltas(*fac.f, c, cell)[fac.v];
        if (prod == 0) break;
      }
      total += prod;
    }
  total /= Rational(mpz_class(ipow(static_cast<std::size_t>(n), d)));
  total.canonicalize();
  return total;
}

std::vector<double> integrate_diagonal_multi(const Graph& g, int d, const Partition& p,
                                             const MultiIntegrand& integrand, std::size_t outputs, int m,
                                             bool split_simplices) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "need at least one quadrature point per axis");
  if (p.dim() != d) throw Error(ErrorKind::InvalidArgument, "partition does not match d");
  const int k = p.size();
  const auto K = static_cast<std::size_t>(k);
  const int E = g.edge_count();
  const std::size_t diag_charts = ipow(static_cast<std::size_t>(E), k);
  const std::size_t cells = ipow(static_cast<std::size_t>(m), k);
  const auto block_of = p.block_of();
  const DiagonalChart dc = diagonal_chart(p);

  // one task per (diagonal chart, first cell coordinate); ordered reduction
  const std::size_t slab = cells / static_cast<std::size_t>(m);
  auto partial = parallel_map(diag_charts * static_cast<std::size_t>(m), [&](std::size_t task) {
    const std::size_t dchart = task / static_cast<std::size_t>(m);
    std::vector<int> bedge(K), cell(K);
    unflatten(dchart, E, bedge);
    Chart chart;
    for (int j = 0; j < d; ++j) chart.edges.push_back(bedge[static_cast<std::size_t>(block_of[static_cast<std::size_t>(j)])]);
    const std::size_t chart_id = chart_index(g, chart);
    std::vector<double> t(K), sum(outputs, 0.0), cell_sum(outputs);
    auto accumulate = [&](std::vector<double>& into, double weight) {
      auto vals = integrand(chart_id, dc.embed(t));
      for (std::size_t o = 0; o < outputs; ++o) into[o] += weight * vals[o];
    };
    for (std::size_t s = 0; s < slab; ++s) {
      unflatten((task % static_cast<std::size_t>(m)) * slab + s, m, cell);
      // groups of blocks sharing an edge and a cell index
      std::vector<std::vector<std::size_t>> groups;
      if (split_simplices) {
        std::vector<bool> used(K, false);
        for (std::size_t a = 0; a < K; ++a) {
          if (used[a]) continue;
          std::vector<std::size_t> grp{a};
          for (std::size_t b = a + 1; b < K; ++b)
            if (!used[b] && bedge[b] == bedge[a] && cell[b] == cell[a]) {
              grp.push_back(b);
              used[b] = true;
            }
          if (grp.size() > 1) groups.push_back(std::move(grp));
        }
      }
      for (std::size_t a = 0; a < K; ++a) t[a] = (cell[a] + 0.5) / m;
      if (groups.empty()) {
        accumulate(sum, 1.0);
        continue;
      }
      // every ordering inside every group, sampled at its centroid
      std::size_t count = 1;
      for (const auto& grp : groups)
        for (std::size_t r = 2; r <= grp.size(); ++r) count *= r;
      std::vector<std::vector<std::size_t>> perms = groups;
      std::fill(cell_sum.begin(), cell_sum.end(), 0.0);
      for (;;) {
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          const double gsize = static_cast<double>(groups[gi].size());
          for (std::size_t r = 0; r < perms[gi].size(); ++r) {
            std::size_t b = perms[gi][r];
            t[b] = (cell[b] + (static_cast<double>(r) + 1.0) / (gsize + 1.0)) / m;
          }
        }
        accumulate(cell_sum, 1.0);
        std::size_t gi = 0;
        while (gi < groups.size() && !std::next_permutation(perms[gi].begin(), perms[gi].end())) ++gi;
        if (gi == groups.size()) break;
      }
      for (std::size_t o = 0; o < outputs; ++o) sum[o] += cell_sum[o] / static_cast<double>(count);
    }
    return sum;
  });
  std::vector<double> total(outputs, 0.0);
  for (const auto& part : partial)
    for (std::size_t o = 0; o < outputs; ++o) total[o] += part[o];
  for (auto& x : total) x /= static_cast<double>(cells);
  return total;
}

double integrate_diagonal(const Graph& g, int d, const Partition& p, const DiagonalIntegrand& integrand, int m,
                          bool split_simplices) {
  auto wrapped = [&](std::size_t chart, std::span<const double> x) { return std::vector<double>{integrand(chart, x)}; };
  return integrate_diagonal_multi(g, d, p, wrapped, 1, m, split_simplices)[0];
}

}  // namespace skelpair
