#include "skelpair/pairing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "skelpair/errors.hpp"

namespace skelpair {

namespace {

bool same_graph(const Graph& a, const Graph& b) { return a.vertices == b.vertices && a.edges == b.edges; }

std::size_t tuple_count(int d) { return std::size_t{1} << d; }

void atomic_max(std::atomic<double>& target, double value) {
  double cur = target.load();
  while (value > cur && !target.compare_exchange_weak(cur, value)) {
  }
}

int default_m(int d, int m) { return m > 0 ? m : (d <= 2 ? 64 : 16); }

void check_exprs(const std::vector<ExprFunction>& fs, int d_expected) {
  if (fs.empty()) throw Error(ErrorKind::InvalidArgument, "no functions given");
  for (const auto& f : fs) {
    if (f.d() != fs.front().d()) throw Error(ErrorKind::DegreeMismatch, "functions differ in dimension");
    if (!same_graph(f.graph(), fs.front().graph()))
      throw Error(ErrorKind::InvalidArgument, "functions live on different graphs");
  }
  if (d_expected > 0 && fs.front().d() != d_expected)
    throw Error(ErrorKind::DegreeMismatch, "expected functions on a " + std::to_string(d_expected) + "-fold product");
  if (static_cast<int>(fs.size()) != fs.front().d() + 1)
    throw Error(ErrorKind::DegreeMismatch, "need d+1 = " + std::to_string(fs.front().d() + 1) + " functions, got " +
                                               std::to_string(fs.size()));
}

bool any_simplex_smooth(const std::vector<ExprFunction>& fs) {
  return std::any_of(fs.begin(), fs.end(), [](const ExprFunction& f) { return f.smoothness() == Smoothness::Simplices; });
}

}  // namespace

PairingReport pair_exact(const std::vector<GridFunction>& fs, const DegreeTable& t) {
  if (fs.empty()) throw Error(ErrorKind::InvalidArgument, "no functions given");
  const int d = fs.front().d();
  const int n = fs.front().n();
  for (const auto& f : fs) {
    if (f.d() != d) throw Error(ErrorKind::DegreeMismatch, "grids differ in dimension");
    if (f.n() != n) throw Error(ErrorKind::LevelMismatch, "grids differ in level");
    if (!same_graph(f.graph(), fs.front().graph()))
      throw Error(ErrorKind::InvalidArgument, "grids live on different graphs");
  }
  if (static_cast<int>(fs.size()) != d + 1)
    throw Error(ErrorKind::DegreeMismatch, "need d+1 grids");
  if (t.d() != d) throw Error(ErrorKind::DegreeMismatch, "degree table built for another d");
  const auto& tuples = t.nonzero_tuples();

  // Each lattice delta is constant on a 1/n-cell, so the integral is a
  // cell sum; accumulate one exact sum per nonzero tuple.
  std::vector<Rational> sums(tuples.size(), 0);
  const std::size_t cells = static_cast<std::size_t>(std::pow(n, d) + 0.5);
  std::vector<int> cell(static_cast<std::size_t>(d));
  std::vector<std::vector<Rational>> deltas(fs.size());
  for (std::size_t c = 0; c < fs.front().chart_count(); ++c)
    for (std::size_t flat = 0; flat < cells; ++flat) {
      std::size_t rest = flat;
      for (std::size_t j = cell.size(); j-- > 0;) {
        cell[j] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      for (std::size_t i = 0; i < fs.size(); ++i) deltas[i] = lattice_deltas(fs[i], c, cell);
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        const auto& vs = tuples[k].first;
        Rational prod = deltas[0][vs[0]];
        for (std::size_t i = 1; i < vs.size() && prod != 0; ++i) prod *= deltas[i][vs[i]];
        if (prod != 0) sums[k] += prod;
      }
    }

  PairingReport rep;
  rep.d = d;
  mpz_class nd, n2d;
  mpz_ui_pow_ui(nd.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(d));
  n2d = nd * nd;
  Rational value = 0;
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    if (sums[k] == 0) continue;
    Rational integral = sums[k] / Rational(nd);
    integral.canonicalize();
    Rational contribution = Rational(n2d) * tuples[k].second * integral;
    contribution.canonicalize();
    value += contribution;
    rep.terms.push_back({std::nullopt, tuples[k].first, tuples[k].second, Number::of(integral), Number::of(contribution)});
  }
  value.canonicalize();
  rep.value = Number::of(value);
  rep.meta = {{"method", "exact"}, {"d", d}, {"n", n}, {"charts", fs.front().chart_count()},
              {"nonzero_tuples", tuples.size()}};
  return rep;
}

PairingReport pair_limit(const std::vector<ExprFunction>& fs, const DegreeTable& t, const VanishingReport* proof,
                         const LimitOptions& opt) {
  check_exprs(fs, 0);
  const int d = fs.front().d();
  if (t.d() != d) throw Error(ErrorKind::DegreeMismatch, "degree table built for another d");
  if (d > opt.max_d)
    throw Error(ErrorKind::TooLarge, "limit pairing is guarded at d <= " + std::to_string(opt.max_d));
  if (!proof || proof->d != d)
    throw Error(ErrorKind::VanishingConditionUnverified, "run the vanishing check for d=" + std::to_string(d) + " first");
  if (!proof->ok())
    throw Error(ErrorKind::VanishingConditionUnverified,
                "vanishing condition fails for d=" + std::to_string(d) + " (" +
                    std::to_string(proof->violations.size()) + " violations)");
  const int m = default_m(d, opt.m);
  const bool split = any_simplex_smooth(fs);
  const Graph& g = fs.front().graph();

  PairingReport rep;
  rep.d = d;
  double value = 0;
  std::atomic<double> max_residual{0.0};
  for (const auto& p : all_partitions(d)) {
    std::vector<std::pair<std::vector<BitVec>, Rational>> terms;
    for (const auto& tv : t.nonzero_tuples()) {
      int a = 0;
      for (BitVec v : tv.first) a += alpha(p, v);
      if (a == d + p.size()) terms.push_back(tv);
    }
    if (terms.empty()) continue;
    std::vector<int> degrees(tuple_count(d));
    for (std::size_t v = 0; v < degrees.size(); ++v) degrees[v] = alpha(p, static_cast<BitVec>(v));

    auto integrand = [&](std::size_t chart, std::span<const double> x) {
      std::vector<std::vector<Differential>> D;
      for (const auto& f : fs) D.push_back(generalized_differentials(f, chart, x, degrees, opt.diff));
      std::vector<double> out(terms.size());
      for (std::size_t k = 0; k < terms.size(); ++k) {
        double prod = 1;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          const auto& dv = D[i][terms[k].first[i]];
          prod *= dv.value;
          atomic_max(max_residual, dv.residual);
        }
        out[k] = prod;
      }
      return out;
    };
    auto integrals = integrate_diagonal_multi(g, d, p, integrand, terms.size(), m, split);
    const double scale = std::ldexp(1.0, -(d + p.size()));
    for (std::size_t k = 0; k < terms.size(); ++k) {
      double contribution = scale * terms[k].second.get_d() * integrals[k];
      value += contribution;
      rep.terms.push_back({p, terms[k].first, terms[k].second, Number::of(integrals[k]), Number::of(contribution)});
    }
  }
  rep.value = Number::of(value);
  rep.meta = {{"method", "limit"}, {"d", d}, {"m", m}, {"split_simplices", split},
              {"max_residual", max_residual.load()}, {"levels", opt.diff.levels}};
  return rep;
}

Zhang2 pair_zhang2(const ExprFunction& f0, const ExprFunction& f1, const ExprFunction& f2, const LimitOptions& opt) {
  std::vector<ExprFunction> fs{f0, f1, f2};
  check_exprs(fs, 2);
  const int m = default_m(2, opt.m);
  const bool split = any_simplex_smooth(fs);
  const Graph& g = f0.graph();
  // the six orderings of {(1,0),(0,1),(1,1)}
  std::vector<std::vector<BitVec>> perms;
  std::vector<BitVec> base{1, 2, 3};
  do perms.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));

  auto integrand_for = [&](const std::vector<int>& degrees, bool diagonal) {
    return [&fs, &perms, &opt, degrees, diagonal](std::size_t chart, std::span<const double> x) {
      std::vector<std::vector<Differential>> D;
      for (const auto& f : fs) D.push_back(generalized_differentials(f, chart, x, degrees, opt.diff));
      double s = 0;
      for (const auto& vs : perms) s += D[0][vs[0]].value * D[1][vs[1]].value * D[2][vs[2]].value;
      if (!diagonal) return s;
      return 2 * s - 4 * D[0][3].value * D[1][3].value * D[2][3].value;
    };
  };
  Zhang2 z;
  z.smooth = integrate_diagonal(g, 2, discrete_partition(2), integrand_for({0, 1, 1, 2}, false), m, split);
  Partition full;
  full.blocks = {{0, 1}};
  z.singular = integrate_diagonal(g, 2, full, integrand_for({0, 1, 1, 1}, true), m, split);
  z.total = z.smooth + z.singular;
  return z;
}

const std::vector<std::vector<BitVec>>& cube3_multisets() {
  // bit i = coordinate i+1: (1,0,0)=1, (0,1,0)=2, (0,0,1)=4, (1,1,0)=3, (1,0,1)=5, (0,1,1)=6, (1,1,1)=7
  static const std::vector<std::vector<BitVec>> B{{1, 2, 4, 7}, {1, 2, 5, 6}, {1, 4, 3, 6}, {2, 4, 3, 5}};
  return B;
}

double pair_cube3(const std::vector<ExprFunction>& fs, const DegreeTable& t, const LimitOptions& opt) {
  check_exprs(fs, 3);
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i].smoothness() != Smoothness::Cubes)
      throw Error(ErrorKind::SmoothnessClassMismatch, "argument " + std::to_string(i) + " is only smooth on simplices",
                  {{"argument", std::to_string(i)}});
  if (t.d() != 3) throw Error(ErrorKind::DegreeMismatch, "need the d=3 degree table");
  std::vector<std::vector<BitVec>> sorted_B;
  Rational coefficient;
  for (std::size_t k = 0; k < cube3_multisets().size(); ++k) {
    auto ms = cube3_multisets()[k];
    std::sort(ms.begin(), ms.end());
    Rational c = t.f_degree(ms);
    if (k == 0) coefficient = c;
    else if (c != coefficient)
      throw Error(ErrorKind::InconsistentRelations, "degree table is not constant on the cube multisets");
    sorted_B.push_back(ms);
  }
  coefficient /= 64;
  std::vector<std::vector<BitVec>> tuples;
  for (BitVec idx = 0; idx < 4096; ++idx) {
    std::vector<BitVec> vs{idx >> 9, (idx >> 6) & 7u, (idx >> 3) & 7u, idx & 7u};
    auto s = vs;
    std::sort(s.begin(), s.end());
    if (std::find(sorted_B.begin(), sorted_B.end(), s) != sorted_B.end()) tuples.push_back(vs);
  }
  const int m = default_m(3, opt.m);
  const std::vector<int> degrees{0, 1, 1, 2, 1, 2, 2, 3};
  auto integrand = [&](std::size_t chart, std::span<const double> x) {
    std::vector<std::vector<Differential>> D;
    for (const auto& f : fs) D.push_back(generalized_differentials(f, chart, x, degrees, opt.diff));
    double s = 0;
    for (const auto& vs : tuples) s += D[0][vs[0]].value * D[1][vs[1]].value * D[2][vs[2]].value * D[3][vs[3]].value;
    return s;
  };
  return coefficient.get_d() * integrate_diagonal(fs.front().graph(), 3, discrete_partition(3), integrand, m, false);
}

std::vector<ConvergenceRow> convergence_table(const std::vector<ExprFunction>& fs, const std::vector<int>& ns,
                                              const DegreeTable& t, const VanishingReport* proof,
                                              const LimitOptions& opt) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw Error(ErrorKind::InvalidArgument, "levels must be ascending");
  const double limit = pair_limit(fs, t, proof, opt).value.as_double();
  std::vector<ConvergenceRow> rows;
  for (int n : ns) {
    std::vector<GridFunction> grids;
    for (const auto& f : fs) grids.push_back(standard_approximation(f, n));
    Rational exact = pair_exact(grids, t).value.q;
    rows.push_back({n, exact, limit, std::fabs(exact.get_d() - limit)});
  }
  return rows;
}

Counterexample counterexample_triple(int n, const DegreeTable& t2) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (t2.d() != 2) throw Error(ErrorKind::DegreeMismatch, "need the d=2 degree table");
  const Graph I = standard_interval();
  // phi_n at a lattice point k/n: (-1)^k / (2n), read periodically for k < 0
  auto phi = [n](long k) {
    Rational r((k % 2 == 0) ? 1 : -1, 2L * n);
    r.canonicalize();
    return r;
  };
  Counterexample ce;
  ce.fs.push_back(GridFunction::tabulate(I, 2, n, [&](std::size_t, std::span<const int> ij) { return phi(ij[0]); }));
  ce.fs.push_back(GridFunction::tabulate(I, 2, n, [&](std::size_t, std::span<const int> ij) { return phi(ij[1]); }));
  ce.fs.push_back(
      GridFunction::tabulate(I, 2, n, [&](std::size_t, std::span<const int> ij) { return phi(std::labs(ij[0] - ij[1])); }));
  ce.value = pair_exact(ce.fs, t2).value.q;
  return ce;
}

}  // namespace skelpair
