#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "skelpair/errors.hpp"
#include "skelpair/pairing.hpp"

using namespace skelpair;

namespace {

const DegreeTable& table(int d) {
  static std::map<int, DegreeTable> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_degree_table(d)).first;
  return it->second;
}

const VanishingReport& proof(int d) {
  static std::map<int, VanishingReport> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, check_vanishing(table(d))).first;
  return it->second;
}

ExprFunction ufun(const std::string& text, int d, Smoothness s = Smoothness::Cubes) {
  return ExprFunction::uniform(standard_interval(), d, s, text);
}

Smoothness smoothness_of(const std::string& text) {
  return parse_expr(text).is_cube_smooth() ? Smoothness::Cubes : Smoothness::Simplices;
}

Rational exact(const std::vector<GridFunction>& fs) { return pair_exact(fs, table(fs.front().d())).value.q; }

std::vector<GridFunction> random_grids(std::mt19937_64& rng, int d, int n, const Graph& g = standard_interval()) {
  std::vector<GridFunction> fs;
  for (int i = 0; i <= d; ++i) fs.push_back(oracle::random_grid(rng, g, d, n));
  return fs;
}

}  // namespace

TEST_SUITE("pairing") {
  TEST_CASE("d=1 identity pairing") {
    auto x = ufun("x1", 1);
    for (int n : {1, 2, 5}) {
      auto g = standard_approximation(x, n);
      auto r = pair_exact({g, g}, table(1));
      CHECK(r.value.exact);
      CHECK(r.value.q == -1);
      CHECK_FALSE(r.terms.empty());
      CHECK_FALSE(r.terms.front().partition.has_value());
    }
  }

  TEST_CASE("d=1 closed form") {
    std::mt19937_64 rng(41);
    Graph path = validate_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    for (const Graph& g : {standard_interval(), path})
      for (int n = 1; n <= 6; ++n) {
        auto fs = random_grids(rng, 1, n, g);
        Rational expect = 0;
        for (std::size_t c = 0; c < fs[0].chart_count(); ++c)
          for (int i = 0; i < n; ++i) {
            std::vector<int> a{i}, b{i + 1};
            expect -= n * (fs[0].at(c, b) - fs[0].at(c, a)) * (fs[1].at(c, b) - fs[1].at(c, a));
          }
        CHECK(exact(fs) == expect);
      }
  }

  TEST_CASE("multilinearity and symmetry") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + trial % 3;
      auto fs = random_grids(rng, 2, n);
      auto g = oracle::random_grid(rng, standard_interval(), 2, n);
      Rational a = oracle::random_rational(rng), b = oracle::random_rational(rng);
      Rational base = exact(fs);
      for (std::size_t slot = 0; slot < 3; ++slot) {
        auto mixed = fs, other = fs;
        mixed[slot] = add(scale(fs[slot], a), scale(g, b));
        other[slot] = g;
        CHECK(exact(mixed) == a * base + b * exact(other));
      }
      std::vector<std::size_t> perm{0, 1, 2};
      while (std::next_permutation(perm.begin(), perm.end())) {
        std::vector<GridFunction> p{fs[perm[0]], fs[perm[1]], fs[perm[2]]};
        CHECK(exact(p) == base);
      }
    }
  }

  TEST_CASE("constants are annihilated") {
    std::mt19937_64 rng(47);
    for (int d = 1; d <= 3; ++d) {
      auto fs = random_grids(rng, d, 2);
      fs[static_cast<std::size_t>(d) / 2] = GridFunction::tabulate(standard_interval(), d, 2,
                                                                  [](std::size_t, std::span<const int>) { return Rational(7, 3); });
      CHECK(exact(fs) == 0);
    }
    std::vector<ExprFunction> fs{ufun("x1*x2", 2), ufun("3", 2), ufun("sin(pi*x1)", 2)};
    CHECK(std::abs(pair_limit(fs, table(2), &proof(2)).value.as_double()) < 1e-12);
  }

  TEST_CASE("refinement of level-1 grids") {
    std::mt19937_64 rng(53);
    for (int d = 1; d <= 2; ++d)
      for (int trial = 0; trial < 5; ++trial) {
        auto fs = random_grids(rng, d, 1);
        Rational base = exact(fs);
        for (int k : {2, 3}) {
          std::vector<GridFunction> r;
          for (const auto& f : fs) r.push_back(refine(f, k));
          CHECK(exact(r) == base);
        }
      }
  }

  TEST_CASE("scaling under subdivision") {
    std::mt19937_64 rng(59);
    for (int d = 1; d <= 2; ++d)
      for (int k : {2, 3}) {
        auto fs = random_grids(rng, d, 2 * k);
        std::vector<GridFunction> r;
        for (const auto& f : fs) r.push_back(rebase(f, k));
        Rational kd = 1;
        for (int i = 0; i < d; ++i) kd *= k;
        CHECK(exact(fs) == kd * exact(r));
      }
  }

  TEST_CASE("limit pairing") {
    std::vector<ExprFunction> d1{ufun("x1^2", 1), ufun("x1^3", 1)};
    LimitOptions fine;
    fine.m = 2048;
    CHECK(std::abs(pair_limit(d1, table(1), &proof(1), fine).value.as_double() + 1.5) < 1e-6);
    std::vector<ExprFunction> xy(3, ufun("x1*x2", 2));
    auto r = pair_limit(xy, table(2), &proof(2));
    CHECK(r.value.as_double() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(r.meta.contains("max_residual"));
    for (const auto& t : r.terms) CHECK(t.partition.has_value());
  }

  TEST_CASE("limit pairing needs a clean vanishing report") {
    std::vector<ExprFunction> xy(3, ufun("x1*x2", 2));
    auto kind = [&](const VanishingReport* p) {
      try {
        pair_limit(xy, table(2), p);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::InvalidArgument;
    };
    CHECK(kind(nullptr) == ErrorKind::VanishingConditionUnverified);
    VanishingReport dirty = proof(2);
    dirty.violations.push_back({});
    CHECK(kind(&dirty) == ErrorKind::VanishingConditionUnverified);
    CHECK(kind(&proof(3)) == ErrorKind::VanishingConditionUnverified);
  }

  TEST_CASE("zhang formula matches the limit") {
    std::vector<std::pair<std::string, std::string>> pairs{{"x1*x2", "max(x1,x2)"}, {"sin(pi*x1)*x2", "x1^2+x2^2"},
                                                           {"abs(x1-x2)*x1", "x1*x2"}};
    for (const auto& [a, b] : pairs) {
      auto fa = ufun(a, 2, smoothness_of(a)), fb = ufun(b, 2, smoothness_of(b));
      auto z = pair_zhang2(fa, fb, fb);
      auto l = pair_limit({fa, fb, fb}, table(2), &proof(2));
      CHECK(std::abs(z.total - l.value.as_double()) < 1e-6);
      CHECK(z.total == doctest::Approx(z.smooth + z.singular));
    }
    auto x = ufun("x1*x2", 2);
    auto z = pair_zhang2(x, x, x);
    CHECK(z.smooth == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(std::abs(z.singular) < 1e-12);
  }

  TEST_CASE("cube formula in d=3") {
    CHECK(cube3_multisets().size() == 4);
    std::vector<ExprFunction> fs{ufun("x1*x2*x3", 3), ufun("x1+x2+x3", 3), ufun("x1*x2*x3", 3),
                                 ufun("x1+x2+x3", 3)};
    double c = pair_cube3(fs, table(3));
    auto l = pair_limit(fs, table(3), &proof(3));
    CHECK(std::abs(c - l.value.as_double()) < 1e-5);
    auto simplex = fs;
    simplex[0] = ufun("max(x1,x2)*x3", 3, Smoothness::Simplices);
    CHECK_THROWS_AS(pair_cube3(simplex, table(3)), Error);
    try {
      pair_cube3(simplex, table(3));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SmoothnessClassMismatch);
    }
  }

  TEST_CASE("convergence of standard approximations") {
    std::vector<ExprFunction> xy(3, ufun("x1*x2", 2));
    auto rows = convergence_table(xy, {2, 4, 8}, table(2), &proof(2));
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.exact == Rational(3, 2) - Rational(1, 2 * r.n * r.n));
      CHECK(std::abs(r.gap - 1.0 / (2.0 * r.n * r.n)) < 1e-9);
    }
  }

  TEST_CASE("triangle-wave triple") {
    auto one = counterexample_triple(1, table(2));
    CHECK(one.fs.size() == 3);
    for (int n = 1; n <= 4; ++n) {
      auto c = counterexample_triple(n, table(2));
      CHECK(c.value == exact(c.fs));
      CHECK(c.value == n * one.value);
      CHECK(c.fs[0].n() == n);
    }
    // scaling one argument scales the value
    auto c = counterexample_triple(3, table(2));
    auto fs = c.fs;
    fs[1] = scale(fs[1], 5);
    CHECK(exact(fs) == 5 * c.value);
  }
}
