#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "skelpair/errors.hpp"
#include "skelpair/funcspace.hpp"

using namespace skelpair;

namespace {

const double pi = std::numbers::pi;

Graph path3() { return validate_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }

ExprFunction ufun(const std::string& text, int d, Smoothness s = Smoothness::Cubes, Graph g = standard_interval()) {
  return ExprFunction::uniform(g, d, s, text);
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("funcspace") {
  TEST_CASE("standard approximation") {
    auto g = standard_approximation(ufun("x1^2", 1), 2);
    REQUIRE(g.chart_values(0).size() == 3);
    CHECK(g.chart_values(0)[0] == 0);
    CHECK(g.chart_values(0)[1] == Rational(1, 4));
    CHECK(g.chart_values(0)[2] == 1);

    auto s = standard_approximation(ufun("sin(pi*x1)", 1), 2);
    CHECK(std::abs(to_double(s.chart_values(0)[1]) - 1.0) < 1e-15);
    CHECK(s.chart_values(0)[1].get_den() <= mpz_class(1) << 53);

    auto xy = standard_approximation(ufun("x1*x2", 2), 2);
    std::vector<int> idx{1, 2};
    CHECK(xy.at(0, idx) == Rational(1, 2));
  }

  TEST_CASE("standard approximation is a projection") {
    std::mt19937_64 rng(3);
    for (int d = 1; d <= 3; ++d) {
      auto f = oracle::random_grid(rng, path3(), d, 2);
      CHECK(standard_approximation(f, 2) == f);
    }
    auto f = standard_approximation(ufun("x1*x2 - x2^2", 2), 2);
    auto r = refine(f, 2);
    CHECK(r.n() == 4);
    // refining a piecewise-affine grid keeps its values at the coarse vertices
    std::vector<int> coarse{1, 1}, fine{2, 2};
    CHECK(r.at(0, fine) == f.at(0, coarse));
    std::vector<Rational> mid{Rational(1, 4), Rational(3, 4)};
    CHECK(r.value_at(0, mid) == f.value_at(0, mid));
  }

  TEST_CASE("grid interpolation") {
    auto f = standard_approximation(ufun("x1+2*x2", 2), 1);
    std::vector<Rational> x{Rational(1, 3), Rational(1, 5)};
    CHECK(f.value_at(0, x) == Rational(1, 3) + Rational(2, 5));
    auto c = scale(add(f, f), Rational(1, 2));
    CHECK(c == f);
  }

  TEST_CASE("gluing on the path graph") {
    Graph g = path3();
    CHECK(kind_of([&] { GridFunction(g, 1, 1, {{0, 1}, {2, 3}}); }) == ErrorKind::GluingMismatch);
    GridFunction ok(g, 1, 1, {{0, 1}, {1, 3}});
    CHECK(ok.chart_count() == 2);
    CHECK(kind_of([&] { GridFunction(g, 1, 1, {{0, 1}}); }) == ErrorKind::SchemaError);
    CHECK(kind_of([&] { GridFunction(g, 1, 2, {{0, 1}, {1, 3}}); }) == ErrorKind::SchemaError);
    // d=2: the corner (b,b) is shared by all four charts
    std::mt19937_64 rng(9);
    auto r = oracle::random_grid(rng, g, 2, 2);
    std::vector<int> end{2, 2}, start{0, 0}, mixed{2, 0};
    CHECK(r.at(0, end) == r.at(3, start));
    CHECK(r.at(0, end) == r.at(1, std::vector<int>{2, 0}));
    CHECK(r.at(1, mixed) == r.at(2, std::vector<int>{0, 2}));
  }

  TEST_CASE("continuity warnings") {
    Graph g = path3();
    ExprFunction broken(g, 1, Smoothness::Cubes, {parse_expr("x1"), parse_expr("x1")});
    CHECK_FALSE(broken.continuity_warnings().empty());
    ExprFunction fine(g, 1, Smoothness::Cubes, {parse_expr("x1"), parse_expr("1+x1")});
    CHECK(fine.continuity_warnings().empty());
  }

  TEST_CASE("fourier delta examples") {
    PointFunction xy = [](std::span<const double> x) { return x[0] * x[1]; };
    std::vector<double> x{0.3, 0.6};
    const double h = 0.125;
    CHECK(fourier_delta(xy, x, 0b00, h) == doctest::Approx(0.18).epsilon(1e-14));
    CHECK(fourier_delta(xy, x, 0b01, h) == doctest::Approx(h * 0.6).epsilon(1e-14));
    CHECK(fourier_delta(xy, x, 0b10, h) == doctest::Approx(h * 0.3).epsilon(1e-14));
    CHECK(fourier_delta(xy, x, 0b11, h) == doctest::Approx(h * h).epsilon(1e-14));
    PointFunction one = [](std::span<const double>) { return 1.0; };
    CHECK(fourier_delta(one, x, 0b01, h) == 0);
    std::vector<double> edge{0.05, 0.5};
    CHECK(kind_of([&] { fourier_delta(xy, edge, 0, 0.1); }) == ErrorKind::OutOfRange);
  }

  TEST_CASE("fourier inversion") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.2, 0.8), c(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
      double a = c(rng), b = c(rng), k = c(rng);
      PointFunction f = [=](std::span<const double> x) {
        return a * std::sin(k * x[0]) * x[1] + b * std::exp(x[0] * x[1]) + x[1] * x[1];
      };
      std::vector<double> x{u(rng), u(rng)};
      const double h = 1.0 / 8;
      auto deltas = fourier_deltas(f, x, h);
      for (BitVec w = 0; w < 4; ++w) {
        double sum = 0;
        for (BitVec v = 0; v < 4; ++v) sum += (inner_parity(v, w) ? -1 : 1) * deltas[v];
        std::vector<double> y{x[0] + ((w & 1u) ? -h : h), x[1] + ((w & 2u) ? -h : h)};
        CHECK(std::abs(sum - f(y)) < 1e-12);
      }
    }
  }

  TEST_CASE("halving h reduces the error at least threefold") {
    // f = x1^3 x2^2 + x1 x2^3; mixed partials known in closed form
    PointFunction f = [](std::span<const double> x) {
      return x[0] * x[0] * x[0] * x[1] * x[1] + x[0] * x[1] * x[1] * x[1];
    };
    std::vector<double> x{0.4, 0.7};
    const double X = x[0], Y = x[1];
    const double exact[4] = {X * X * X * Y * Y + X * Y * Y * Y, 3 * X * X * Y * Y + Y * Y * Y,
                             2 * X * X * X * Y + 3 * X * Y * Y, 6 * X * X * Y + 3 * Y * Y};
    for (BitVec v = 1; v < 4; ++v) {
      double prev = -1;
      for (double h = 1.0 / 32; h >= 1.0 / 512; h /= 2) {
        double err = std::abs(fourier_delta(f, x, v, h) / std::pow(h, weight(v)) - exact[v]);
        if (prev > 0) CHECK(prev / err >= 3.0);
        prev = err;
      }
    }
  }

  TEST_CASE("lattice deltas against analytic partials") {
    auto f = ufun("x1^2*x2 + x2^3", 2);
    const int n = 64;
    auto grid = standard_approximation(f, n);
    std::vector<double> x{0.3, 0.55};
    LatticePoint p{0, {static_cast<int>(x[0] * n), static_cast<int>(x[1] * n)}, n};
    auto c = p.center();
    const double exact[4] = {c[0] * c[0] * c[1] + c[1] * c[1] * c[1], 2 * c[0] * c[1], c[0] * c[0] + 3 * c[1] * c[1],
                             2 * c[0]};
    const double at_x[4] = {x[0] * x[0] * x[1] + x[1] * x[1] * x[1], 2 * x[0] * x[1],
                            x[0] * x[0] + 3 * x[1] * x[1], 2 * x[0]};
    for (BitVec v = 0; v < 4; ++v) {
      double scaled = std::pow(2.0 * n, weight(v)) * to_double(lattice_delta(grid, p, v));
      CHECK(std::abs(scaled - exact[v]) < 1e-3);
      CHECK(std::abs(scaled - at_x[v]) < 5e-2);
    }
  }

  TEST_CASE("lattice delta of f equals that of its approximation") {
    auto f = ufun("x1*x2^2 - 3*x1^3", 2);
    for (int n : {1, 3, 8}) {
      auto grid = standard_approximation(f, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          LatticePoint p{0, {i, j}, n};
          auto all = lattice_deltas(grid, 0, p.cell);
          for (BitVec v = 0; v < 4; ++v) {
            CHECK(lattice_delta(grid, p, v) == all[v]);
            CHECK(std::abs(lattice_delta(f, p, v) - to_double(all[v])) < 1e-14);
          }
        }
    }
    LatticePoint wrong{0, {0, 0}, 2};
    auto grid = standard_approximation(f, 3);
    CHECK(kind_of([&] { lattice_delta(grid, wrong, 0); }) == ErrorKind::LevelMismatch);
  }

  TEST_CASE("generalized differentials") {
    auto xy = ufun("x1*x2", 2);
    std::vector<double> x{0.3, 0.6};
    CHECK(generalized_differential(xy, 0, x, 0b11, 2).value == doctest::Approx(1).epsilon(1e-9));
    CHECK(generalized_differential(xy, 0, x, 0b01, 1).value == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(generalized_differential(xy, 0, x, 0b00, 0).value == doctest::Approx(0.18).epsilon(1e-9));

    auto s = ufun("sin(pi*x1)*x2", 2);
    auto d = generalized_differential(s, 0, x, 0b11, 2);
    CHECK(std::abs(d.value - pi * std::cos(pi * 0.3)) < 1e-8);
    CHECK(d.residual < 1e-6);

    // kink along the diagonal
    auto a = ufun("abs(x1-x2)", 2, Smoothness::Simplices);
    std::vector<double> diag{0.5, 0.5};
    CHECK(generalized_differential(a, 0, diag, 0b11, 1).value == doctest::Approx(-1).epsilon(1e-9));
    auto m = ufun("max(x1,x2)", 2, Smoothness::Simplices);
    CHECK(zhang_delta(m, 0, diag).value == doctest::Approx(-1).epsilon(1e-9));
    CHECK(std::abs(zhang_delta(xy, 0, diag).value) < 1e-9);

    std::vector<double> near{1e-7, 0.5};
    CHECK(kind_of([&] { generalized_differential(xy, 0, near, 0b11, 2); }) == ErrorKind::DegenerateRadius);
  }

  TEST_CASE("diagonal integrals") {
    Graph I = standard_interval();
    auto one = [](std::size_t, std::span<const double>) { return 1.0; };
    CHECK(integrate_diagonal(I, 2, Partition{{{0, 1}}}, one, 4) == doctest::Approx(1).epsilon(1e-14));
    CHECK(integrate_diagonal(I, 2, discrete_partition(2), one, 4) == doctest::Approx(1).epsilon(1e-14));
    CHECK(integrate_diagonal(path3(), 2, discrete_partition(2), one, 3) == doctest::Approx(4).epsilon(1e-14));
    auto first = [](std::size_t, std::span<const double> x) { return x[0]; };
    for (int m : {1, 2, 7})
      CHECK(std::abs(integrate_diagonal(I, 2, Partition{{{0, 1}}}, first, m) - 0.5) < 1e-12);
    auto prod = [](std::size_t, std::span<const double> x) { return x[0] * x[1] * x[2]; };
    CHECK(std::abs(integrate_diagonal(I, 3, discrete_partition(3), prod, 5) - 0.125) < 1e-12);
    // the simplex split keeps samples off coarser diagonals
    auto gap = [](std::size_t, std::span<const double> x) { return std::abs(x[0] - x[1]) < 1e-12 ? 100.0 : 1.0; };
    CHECK(integrate_diagonal(I, 2, discrete_partition(2), gap, 4, true) == doctest::Approx(1).epsilon(1e-12));
    auto multi = integrate_diagonal_multi(
        I, 2, discrete_partition(2),
        [](std::size_t, std::span<const double> x) { return std::vector<double>{1.0, x[0] * x[1]}; }, 2, 8);
    CHECK(multi[0] == doctest::Approx(1));
    CHECK(std::abs(multi[1] - 0.25) < 1e-12);
  }

  TEST_CASE("grid products") {
    Graph I = standard_interval();
    auto one = GridFunction::tabulate(I, 2, 3, [](std::size_t, std::span<const int>) { return Rational(1); });
    CHECK(integrate_grid_product({{&one, 0}}, 3) == 1);
    CHECK(integrate_grid_product({{&one, 1}}, 3) == 0);
    auto xy = standard_approximation(ufun("x1*x2", 2), 4);
    // lattice_delta at 11 is h^2 with h = 1/8 on every cell
    CHECK(integrate_grid_product({{&xy, 3}}, 4) == Rational(1, 64));
    CHECK(integrate_grid_product({{&xy, 0}}, 4) == Rational(1, 4));
    CHECK(kind_of([&] { integrate_grid_product({{&xy, 0}, {&one, 0}}, 4); }) == ErrorKind::LevelMismatch);
  }

  TEST_CASE("subdivision identity on the pixelated strata") {
    // For g constant on cells: the part of the integral where the cell
    // indices coincide exactly along P equals n^{|P|-d} times the diagonal
    // integral, once the diagonal side is restricted to points whose blocks
    // sit in pairwise different cells.
    std::mt19937_64 rng(23);
    Graph I = standard_interval();
    for (int d = 2; d <= 3; ++d)
      for (int n = 1; n <= 8; ++n) {
        std::size_t cells = 1;
        for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(n);
        std::vector<double> g(cells);
        std::uniform_real_distribution<double> u(-1, 1);
        for (auto& x : g) x = u(rng);
        auto cell_of = [&](std::span<const double> x) {
          std::size_t id = 0;
          for (double t : x) id = id * static_cast<std::size_t>(n) + static_cast<std::size_t>(std::min(n - 1, static_cast<int>(t * n)));
          return id;
        };
        for (const auto& P : all_partitions(d)) {
          double lhs = 0;
          for (std::size_t id = 0; id < cells; ++id) {
            std::vector<double> centre(static_cast<std::size_t>(d));
            std::size_t r = id;
            for (int i = d - 1; i >= 0; --i) {
              centre[static_cast<std::size_t>(i)] = (static_cast<double>(r % static_cast<std::size_t>(n)) + 0.5) / n;
              r /= static_cast<std::size_t>(n);
            }
            if (point_partition(centre) == P) lhs += g[id];
          }
          lhs /= static_cast<double>(cells);
          auto integrand = [&](std::size_t, std::span<const double> x) {
            auto bo = P.block_of();
            for (int i = 0; i < d; ++i)
              for (int j = 0; j < d; ++j)
                if (bo[static_cast<std::size_t>(i)] != bo[static_cast<std::size_t>(j)] &&
                    static_cast<int>(x[static_cast<std::size_t>(i)] * n) == static_cast<int>(x[static_cast<std::size_t>(j)] * n))
                  return 0.0;
            return g[cell_of(x)];
          };
          double rhs = std::pow(n, P.size() - d) * integrate_diagonal(I, d, P, integrand, n);
          CHECK(std::abs(lhs - rhs) < 1e-12);
        }
      }
  }

  TEST_CASE("rebasing over a subdivision") {
    std::mt19937_64 rng(31);
    for (Graph g : {standard_interval(), path3()})
      for (int d = 1; d <= 2; ++d)
        for (int k : {1, 2, 3}) {
          const int n = 2;
          auto f = oracle::random_grid(rng, g, d, n * k);
          auto r = rebase(f, k);
          CHECK(r.n() == n);
          auto sd = subdivide(g, k);
          auto sd_charts = charts(sd.graph, d);
          for (std::size_t c = 0; c < sd_charts.size(); ++c) {
            Chart base;
            for (int e : sd_charts[c].edges) base.edges.push_back(e / k);
            std::size_t bc = chart_index(g, base);
            std::vector<int> cell(static_cast<std::size_t>(d), 0), fine(static_cast<std::size_t>(d));
            for (;;) {
              for (std::size_t j = 0; j < cell.size(); ++j) fine[j] = (sd_charts[c].edges[j] % k) * n + cell[j];
              CHECK(lattice_deltas(r, c, cell) == lattice_deltas(f, bc, fine));
              std::size_t j = cell.size();
              while (j > 0 && ++cell[j - 1] == n) cell[--j] = 0;
              if (j == 0) break;
            }
          }
          for (BitVec v = 0; v < (1u << d); ++v) {
            Rational kd = 1;
            for (int i = 0; i < d; ++i) kd *= k;
            CHECK(integrate_grid_product({{&r, v}}, n) == kd * integrate_grid_product({{&f, v}}, n * k));
          }
        }
    auto f = oracle::random_grid(rng, standard_interval(), 1, 3);
    CHECK(kind_of([&] { rebase(f, 2); }) == ErrorKind::LevelMismatch);
  }
}
