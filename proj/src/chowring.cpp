#include "skelpair/chowring.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "skelpair/errors.hpp"

namespace skelpair {

namespace {

bool leq(BitVec a, BitVec b) { return (a & ~b) == 0; }
bool comparable(BitVec a, BitVec b) { return leq(a, b) || leq(b, a); }

void check_dim(int d) {
  if (d < 1 || d > 16) throw Error(ErrorKind::InvalidArgument, "dimension out of range");
}

}  // namespace

std::string monomial_to_string(const Monomial& m, int d) {
  std::string s;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!s.empty()) s += "*";
    s += bitvec_to_string(m[i], d);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

bool is_chain(std::span<const BitVec> support) {
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (!comparable(support[i], support[j])) return false;
  return true;
}

void ChowElement::add(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (terms.empty()) degree = static_cast<int>(m.size());
  else if (static_cast<int>(m.size()) != degree)
    throw Error(ErrorKind::DegreeMismatch, "inhomogeneous sum in the Chow ring");
  auto [it, inserted] = terms.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

ChowElement vertex_element(int d, BitVec v) {
  ChowElement e;
  e.d = d;
  e.add({v}, 1);
  return e;
}

ChowElement expand_F(int d, BitVec v) {
  check_dim(d);
  ChowElement e;
  e.d = d;
  for (BitVec w = 0; w < (1u << d); ++w) e.add({w}, inner_parity(v, w) ? -1 : 1);
  return e;
}

ChowElement multiply(const ChowElement& a, const ChowElement& b) {
  if (a.d != b.d) throw Error(ErrorKind::DegreeMismatch, "factors live in different dimensions");
  ChowElement out;
  out.d = a.d;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      if (!is_chain(m)) continue;  // relation (1): non-simplices vanish
      out.add(m, ca * cb);
    }
  if (out.terms.empty()) out.degree = a.degree + b.degree;
  return out;
}

ChowElement scale(const ChowElement& a, const Rational& c) {
  ChowElement out;
  out.d = a.d;
  out.degree = a.degree;
  if (c == 0) return out;
  for (const auto& [m, x] : a.terms) out.terms.emplace(m, x * c);
  return out;
}

ChowElement add(const ChowElement& a, const ChowElement& b) {
  ChowElement out = a;
  for (const auto& [m, x] : b.terms) out.add(m, x);
  return out;
}

ChowElement psi(const ChowElement& e) {
  const BitVec all = (1u << e.d) - 1;
  ChowElement out;
  out.d = e.d;
  out.degree = e.degree;
  for (const auto& [m, c] : e.terms) {
    Monomial mm;
    for (BitVec v : m) mm.push_back(v ^ all);
    std::sort(mm.begin(), mm.end());
    out.terms.emplace(std::move(mm), c);
  }
  return out;
}

// ---- degree table -------------------------------------------------------

std::uint64_t DegreeTable::pack(const Monomial& m) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < m.size(); ++i) k |= static_cast<std::uint64_t>(m[i]) << (7 * i);
  return k;
}

Rational DegreeTable::value(const Monomial& m) const {
  if (static_cast<int>(m.size()) != d_ + 1)
    throw Error(ErrorKind::DegreeMismatch, "monomial of degree " + std::to_string(m.size()) +
                                               " in a degree table for d=" + std::to_string(d_));
  Monomial s = m;
  std::sort(s.begin(), s.end());
  auto it = entries_.find(pack(s));
  return it == entries_.end() ? Rational(0) : it->second;
}

std::vector<std::pair<Monomial, Rational>> DegreeTable::entries() const {
  std::vector<std::pair<Monomial, Rational>> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) {
    Monomial m;
    for (int i = 0; i <= d_; ++i) m.push_back(static_cast<BitVec>((k >> (7 * i)) & 0x7f));
    out.emplace_back(std::move(m), v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

// all chains of {0,1}^d (strictly increasing in the product order)
std::vector<std::vector<BitVec>> all_chains(int d) {
  std::vector<std::vector<BitVec>> out;
  const BitVec N = 1u << d;
  std::vector<BitVec> cur;
  std::function<void()> rec = [&]() {
    out.push_back(cur);
    for (BitVec w = 0; w < N; ++w)
      if (w != cur.back() && leq(cur.back(), w)) {
        cur.push_back(w);
        rec();
        cur.pop_back();
      }
  };
  for (BitVec v = 0; v < N; ++v) {
    cur = {v};
    rec();
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 1; a <= total - parts + 1; ++a) {
    cur.push_back(a);
    compositions(total - a, parts - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  if (parts < 1 || total < parts) return out;
  std::vector<int> cur;
  compositions(total, parts, cur, out);
  return out;
}

Monomial with_multiplicities(const std::vector<BitVec>& support, const std::vector<int>& comp) {
  Monomial m;
  for (std::size_t i = 0; i < support.size(); ++i) m.insert(m.end(), static_cast<std::size_t>(comp[i]), support[i]);
  std::sort(m.begin(), m.end());
  return m;
}

struct BlockResult {
  std::vector<int> free_columns;
  bool consistent = true;
  std::vector<Rational> solution;
  std::vector<bool> depends_on_free;
};

// Gauss-Jordan on a small dense system over Q.
BlockResult solve_block(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t n) {
  BlockResult res;
  res.solution.assign(n, 0);
  res.depends_on_free.assign(n, false);
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) {
      res.free_columns.push_back(static_cast<int>(c));
      continue;
    }
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t k = 0; k < n; ++k) rows[i][k] -= f * rows[r][k];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (rhs[i] != 0) res.consistent = false;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) {
    auto c = static_cast<std::size_t>(pivot_col[i]);
    res.solution[c] = rhs[i];
    for (int f : res.free_columns)
      if (rows[i][static_cast<std::size_t>(f)] != 0) res.depends_on_free[c] = true;
  }
  for (int f : res.free_columns) res.depends_on_free[static_cast<std::size_t>(f)] = true;
  return res;
}

}  // namespace

DegreeTable build_degree_table(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  if (d > 5) throw Error(ErrorKind::TooLarge, "degree tables are guarded at d <= 5");
  DegreeTable t;
  t.d_ = d;
  const BitVec N = 1u << d;
  std::unordered_map<std::uint64_t, bool> tainted;
  std::vector<std::string> free_monomials;

  auto lookup = [&](const Monomial& m, bool& taint) -> Rational {
    if (!is_chain(m)) return 0;
    auto k = DegreeTable::pack(m);
    if (tainted.count(k)) taint = true;
    auto it = t.entries_.find(k);
    // larger supports are solved first, so a miss here is a bug
    if (it == t.entries_.end() && !tainted.count(k))
      throw Error(ErrorKind::InconsistentRelations, "relation references unsolved monomial " +
                                                        monomial_to_string(m, d));
    return it == t.entries_.end() ? Rational(0) : it->second;
  };

  // Each relation instance N*C1*(sum C') only involves the support of N*C1
  // and that support plus one vertex, so the system is block triangular in
  // the support; blocks are solved from maximal chains downwards.
  for (const auto& S : all_chains(d)) {
    const int k = static_cast<int>(S.size());
    if (k > d + 1) continue;
    std::vector<Monomial> unknowns;
    for (const auto& comp : compositions(d + 1, k)) unknowns.push_back(with_multiplicities(S, comp));
    if (k == d + 1) {
      t.entries_[DegreeTable::pack(unknowns[0])] = 1;  // normalization
      continue;
    }
    std::unordered_map<std::uint64_t, std::size_t> column;
    for (std::size_t i = 0; i < unknowns.size(); ++i) column[DegreeTable::pack(unknowns[i])] = i;

    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    bool block_tainted = false;
    std::vector<int> split_axes;
    for (int i = 0; i < d; ++i) {
      bool zero = false, one = false;
      for (BitVec s : S) ((s >> i) & 1u ? one : zero) = true;
      if (zero && one) split_axes.push_back(i);
    }
    for (const auto& comp : compositions(d, k)) {
      Monomial base = with_multiplicities(S, comp);
      // (c): all C';  (d): C' with fixed coordinate on a split axis
      std::vector<std::vector<BitVec>> sums;
      std::vector<BitVec> everything;
      for (BitVec w = 0; w < N; ++w) everything.push_back(w);
      sums.push_back(everything);
      for (int i : split_axes)
        for (BitVec b = 0; b < 2; ++b) {
          std::vector<BitVec> part;
          for (BitVec w = 0; w < N; ++w)
            if (((w >> i) & 1u) == b) part.push_back(w);
          sums.push_back(part);
        }
      for (const auto& sum : sums) {
        std::vector<Rational> row(unknowns.size(), 0);
        Rational r = 0;
        for (BitVec w : sum) {
          Monomial m = base;
          m.insert(std::upper_bound(m.begin(), m.end(), w), w);
          auto it = column.find(DegreeTable::pack(m));
          if (it != column.end()) row[it->second] += 1;
          else r -= lookup(m, block_tainted);
        }
        rows.push_back(std::move(row));
        rhs.push_back(std::move(r));
      }
    }
    BlockResult res = solve_block(std::move(rows), std::move(rhs), unknowns.size());
    if (!res.consistent && !block_tainted)
      throw Error(ErrorKind::InconsistentRelations,
                  "relations are inconsistent on support " + monomial_to_string(S, d),
                  {{"support", monomial_to_string(S, d)}});
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
      auto key = DegreeTable::pack(unknowns[i]);
      if (block_tainted || res.depends_on_free[i]) tainted[key] = true;
      else t.entries_[key] = res.solution[i];
    }
    for (int f : res.free_columns) free_monomials.push_back(monomial_to_string(unknowns[static_cast<std::size_t>(f)], d));
  }
  if (!free_monomials.empty()) {
    std::string list;
    for (const auto& s : free_monomials) list += (list.empty() ? "" : ";") + s;
    throw Error(ErrorKind::Underdetermined,
                std::to_string(free_monomials.size()) + " free monomial(s), " + std::to_string(tainted.size()) +
                    " value(s) undetermined",
                {{"free", list}});
  }
  if (d <= 4) t.build_dense_fdegree();
  else t.sparse_ = std::make_shared<DegreeTable::SparseState>();
  return t;
}

// Symmetric tensor G[w_0..w_d] = ldeg(C_{w_0}...C_{w_d}); its full Walsh-
// Hadamard transform over all d(d+1) bits is exactly ldeg(F_{v_0}...F_{v_d}).
void DegreeTable::build_dense_fdegree() {
  const int d = d_;
  const int bits = d * (d + 1);
  const std::size_t size = std::size_t{1} << bits;
  mpz_class lcd = 1;
  for (const auto& [k, v] : entries_) mpz_lcm(lcd.get_mpz_t(), lcd.get_mpz_t(), v.get_den_mpz_t());
  fdeg_scale_ = lcd;
  mpz_class bound = 0;
  std::unordered_map<std::uint64_t, std::int64_t> scaled;
  for (const auto& [k, v] : entries_) {
    mpz_class s = v.get_num() * (lcd / v.get_den());
    if (abs(s) > bound) bound = abs(s);
    scaled[k] = s.get_si();
  }
  if (bound * (mpz_class(1) << bits) >= (mpz_class(1) << 62))
    throw Error(ErrorKind::TooLarge, "F-degree transform would overflow 64-bit integers");

  fdeg_numer_.assign(size, 0);
  const BitVec mask = (1u << d) - 1;
  Monomial m(static_cast<std::size_t>(d + 1));
  for (std::size_t idx = 0; idx < size; ++idx) {
    for (int i = 0; i <= d; ++i) m[static_cast<std::size_t>(i)] = static_cast<BitVec>(idx >> (d * (d - i))) & mask;
    std::sort(m.begin(), m.end());
    if (!is_chain(m)) continue;
    auto it = scaled.find(pack(m));
    if (it != scaled.end()) fdeg_numer_[idx] = it->second;
  }
  for (std::size_t h = 1; h < size; h <<= 1)
    for (std::size_t i = 0; i < size; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        std::int64_t a = fdeg_numer_[j], b = fdeg_numer_[j + h];
        fdeg_numer_[j] = a + b;
        fdeg_numer_[j + h] = a - b;
      }
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (fdeg_numer_[idx] == 0) continue;
    std::vector<BitVec> vs;
    for (int i = 0; i <= d; ++i) vs.push_back(static_cast<BitVec>(idx >> (d * (d - i))) & mask);
    Rational q(mpz_class(static_cast<long>(fdeg_numer_[idx])), lcd);
    q.canonicalize();
    nonzero_.emplace_back(std::move(vs), std::move(q));
  }
}

Rational DegreeTable::f_degree(std::span<const BitVec> vs) const {
  if (static_cast<int>(vs.size()) != d_ + 1)
    throw Error(ErrorKind::DegreeMismatch, "need exactly d+1 generators");
  const BitVec mask = (1u << d_) - 1;
  for (BitVec v : vs)
    if (v & ~mask) throw Error(ErrorKind::InvalidArgument, "bit vector longer than d");
  if (!fdeg_numer_.empty()) {
    std::size_t idx = 0;
    for (BitVec v : vs) idx = (idx << d_) | v;
    Rational q(mpz_class(static_cast<long>(fdeg_numer_[idx])), fdeg_scale_);
    q.canonicalize();
    return q;
  }
  return f_degree_sparse(vs);
}

Rational DegreeTable::f_degree_sparse(std::span<const BitVec> vs) const {
  std::vector<BitVec> sorted(vs.begin(), vs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t key = pack(sorted);
  std::lock_guard<std::mutex> lock(sparse_->mutex);
  if (auto it = sparse_->memo.find(key); it != sparse_->memo.end()) return it->second;
  if (sparse_->chain_tuples.empty()) {
    // every ordered tuple whose entries form a chain, with its ldeg
    std::vector<BitVec> cur;
    const BitVec N = 1u << d_;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == d_ + 1) {
        Monomial m = cur;
        std::sort(m.begin(), m.end());
        auto it = entries_.find(pack(m));
        if (it != entries_.end() && it->second != 0) sparse_->chain_tuples.emplace_back(cur, it->second);
        return;
      }
      for (BitVec w = 0; w < N; ++w) {
        bool ok = true;
        for (BitVec c : cur)
          if (!comparable(c, w)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        cur.push_back(w);
        rec();
        cur.pop_back();
      }
    };
    rec();
  }
  Rational total = 0;
  for (const auto& [ws, val] : sparse_->chain_tuples) {
    int parity = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) parity ^= inner_parity(sorted[i], ws[i]);
    if (parity) total -= val;
    else total += val;
  }
  sparse_->memo.emplace(key, total);
  return total;
}

const std::vector<std::pair<std::vector<BitVec>, Rational>>& DegreeTable::nonzero_tuples() const {
  if (fdeg_numer_.empty())
    throw Error(ErrorKind::TooLarge, "the full F-degree table is only tabulated for d <= 4");
  return nonzero_;
}

Rational ldeg(const ChowElement& e, const DegreeTable& t) {
  if (e.d != t.d()) throw Error(ErrorKind::DegreeMismatch, "element and table dimensions differ");
  if (!e.terms.empty() && e.degree != t.d() + 1)
    throw Error(ErrorKind::DegreeMismatch, "ldeg needs an element of degree d+1");
  Rational total = 0;
  for (const auto& [m, c] : e.terms) total += c * t.value(m);
  return total;
}

Rational f_degree_by_expansion(std::span<const BitVec> vs, const DegreeTable& t) {
  if (static_cast<int>(vs.size()) != t.d() + 1)
    throw Error(ErrorKind::DegreeMismatch, "need exactly d+1 generators");
  ChowElement prod = expand_F(t.d(), vs[0]);
  for (std::size_t i = 1; i < vs.size(); ++i) prod = multiply(prod, expand_F(t.d(), vs[i]));
  return ldeg(prod, t);
}

VanishingReport check_vanishing(const DegreeTable& t) {
  const int d = t.d();
  VanishingReport rep;
  rep.d = d;
  if (!t.has_dense_fdegree())
    throw Error(ErrorKind::TooLarge, "vanishing check is only feasible for d <= 4");
  const auto parts = all_partitions(d);
  const std::uint64_t tuples = std::uint64_t{1} << (d * (d + 1));
  rep.checked = tuples * parts.size();
  rep.nonzero_tuples = t.nonzero_tuples().size();
  // zero tuples can never violate, so only the nonzero list is scanned
  for (const auto& p : parts)
    for (const auto& [vs, val] : t.nonzero_tuples()) {
      int a = 0;
      for (BitVec v : vs) a += alpha(p, v);
      if (a < d + p.size()) rep.violations.push_back({p, vs, a, val});
    }
  return rep;
}

}  // namespace skelpair
