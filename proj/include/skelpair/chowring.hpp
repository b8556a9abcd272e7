#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "skelpair/rational.hpp"
#include "skelpair/skeleton.hpp"

namespace skelpair {

// Sorted list of cube vertices with repetition; C_{00}^2 C_{11} in d=2 is {0,0,3}.
using Monomial = std::vector<BitVec>;

std::string monomial_to_string(const Monomial& m, int d);  // "00^2*11"

bool is_chain(std::span<const BitVec> support);

struct ChowElement {
  int d = 1;
  int degree = 0;  // 0 also for the zero element
  std::map<Monomial, Rational> terms;

  void add(const Monomial& m, const Rational& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const ChowElement& o) const { return d == o.d && terms == o.terms; }
};

ChowElement vertex_element(int d, BitVec v);
ChowElement expand_F(int d, BitVec v);
ChowElement multiply(const ChowElement& a, const ChowElement& b);
ChowElement scale(const ChowElement& a, const Rational& c);
ChowElement add(const ChowElement& a, const ChowElement& b);
ChowElement psi(const ChowElement& e);

class DegreeTable {
 public:
  int d() const { return d_; }
  // ldeg of a single degree-(d+1) monomial; non-chain support gives 0.
  Rational value(const Monomial& m) const;
  // chain-support monomials with their degrees, in canonical order
  std::vector<std::pair<Monomial, Rational>> entries() const;
  std::size_t size() const { return entries_.size(); }

  // ldeg(F_{v_0} ... F_{v_d})
  Rational f_degree(std::span<const BitVec> vs) const;
  // every ordered (d+1)-tuple with nonzero F-degree, v_0 slowest.
  // Only available for d <= 4 (TooLarge otherwise).
  const std::vector<std::pair<std::vector<BitVec>, Rational>>& nonzero_tuples() const;
  bool has_dense_fdegree() const { return !fdeg_numer_.empty(); }

 private:
  friend DegreeTable build_degree_table(int d);
  static std::uint64_t pack(const Monomial& m);
  void build_dense_fdegree();
  Rational f_degree_sparse(std::span<const BitVec> vs) const;

  int d_ = 0;
  std::unordered_map<std::uint64_t, Rational> entries_;
  // dense route (d <= 4): fdeg(tuple) = fdeg_numer_[index] / fdeg_scale_
  std::vector<std::int64_t> fdeg_numer_;
  mpz_class fdeg_scale_;
  std::vector<std::pair<std::vector<BitVec>, Rational>> nonzero_;
  // sparse route (d = 5): ordered chain tuples, memo keyed by sorted multiset
  struct SparseState {
    std::mutex mutex;
    std::vector<std::pair<std::vector<BitVec>, Rational>> chain_tuples;
    std::unordered_map<std::uint64_t, Rational> memo;
  };
  std::shared_ptr<SparseState> sparse_;
};

DegreeTable build_degree_table(int d);

Rational ldeg(const ChowElement& e, const DegreeTable& t);

inline Rational f_degree(std::span<const BitVec> vs, const DegreeTable& t) { return t.f_degree(vs); }

// Same number through explicit expansion and multiplication in the ring.
Rational f_degree_by_expansion(std::span<const BitVec> vs, const DegreeTable& t);

struct Violation {
  Partition partition;
  std::vector<BitVec> tuple;
  int alpha_sum = 0;
  Rational value;
};

struct VanishingReport {
  int d = 0;
  std::uint64_t checked = 0;  // (partition, ordered tuple) pairs
  std::uint64_t nonzero_tuples = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

VanishingReport check_vanishing(const DegreeTable& t);

}  // namespace skelpair
