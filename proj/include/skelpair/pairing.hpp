#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skelpair/chowring.hpp"
#include "skelpair/funcspace.hpp"

namespace skelpair {

// Exact rational or floating value, as carried through a report.
struct Number {
  bool exact = true;
  Rational q;
  double x = 0;

  static Number of(const Rational& r) { return Number{true, r, r.get_d()}; }
  static Number of(double v) { return Number{false, 0, v}; }
  double as_double() const { return exact ? q.get_d() : x; }
};

struct PairingTerm {
  std::optional<Partition> partition;  // empty on the exact path
  std::vector<BitVec> tuple;
  Rational ldeg;
  Number integral;
  Number contribution;
};

struct PairingReport {
  Number value;
  int d = 0;
  std::vector<PairingTerm> terms;
  nlohmann::json meta = nlohmann::json::object();
};

// <f_0..f_d>_{W,n} = n^{2d} sum ldeg(prod F_{v_i}) int prod lattice_delta(f_i, v_i)
PairingReport pair_exact(const std::vector<GridFunction>& fs, const DegreeTable& t);

struct LimitOptions {
  int m = 0;  // points per axis; 0 picks 64 for d <= 2, 16 for d = 3
  DifferentialOptions diff;
  int max_d = 3;
};

// Partition/diagonal formula. `proof` must be a clean check_vanishing(t).
PairingReport pair_limit(const std::vector<ExprFunction>& fs, const DegreeTable& t, const VanishingReport* proof,
                         const LimitOptions& opt = {});

struct Zhang2 {
  double smooth = 0, singular = 0, total = 0;
};

Zhang2 pair_zhang2(const ExprFunction& f0, const ExprFunction& f1, const ExprFunction& f2,
                   const LimitOptions& opt = {});

// The four multisets of the cube-smooth d=3 formula.
const std::vector<std::vector<BitVec>>& cube3_multisets();

// Cube-smooth d=3 formula; coefficient ldeg_B / 2^6 read from the table.
double pair_cube3(const std::vector<ExprFunction>& fs, const DegreeTable& t, const LimitOptions& opt = {});

struct ConvergenceRow {
  int n = 0;
  Rational exact;
  double limit = 0;
  double gap = 0;
};

std::vector<ConvergenceRow> convergence_table(const std::vector<ExprFunction>& fs, const std::vector<int>& ns,
                                              const DegreeTable& t, const VanishingReport* proof,
                                              const LimitOptions& opt = {});

struct Counterexample {
  std::vector<GridFunction> fs;
  Rational value;
};

// Triangle-wave triple on the unit square at level n.
Counterexample counterexample_triple(int n, const DegreeTable& t2);

}  // namespace skelpair
