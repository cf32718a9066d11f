#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coverflow/error.hpp"

namespace coverflow::ladder {

// Homomorphism Gamma -> Z_2 of finite support, i.e. the indicator of a
// finite set of nonzero integers.
class Z2Hom {
public:
  Z2Hom() = default;
  Z2Hom(std::initializer_list<std::int64_t> s) : Z2Hom(std::vector<std::int64_t>(s)) {}
  explicit Z2Hom(std::vector<std::int64_t> s) : support_(std::move(s)) {
    std::sort(support_.begin(), support_.end());
    if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
      fail(ErrorKind::Precondition, "Z2Hom support has a repeated index");
    if (std::binary_search(support_.begin(), support_.end(), 0))
      fail(ErrorKind::Precondition, "index 0 is not a generator");
  }

  bool operator()(std::int64_t i) const { return std::binary_search(support_.begin(), support_.end(), i); }
  const std::vector<std::int64_t>& support() const noexcept { return support_; }
  bool is_zero() const noexcept { return support_.empty(); }

  std::int64_t radius() const {
    return support_.empty() ? 0 : std::max(-support_.front(), support_.back());
  }

  friend Z2Hom operator^(const Z2Hom& a, const Z2Hom& b) {
    Z2Hom r;
    std::set_symmetric_difference(a.support_.begin(), a.support_.end(), b.support_.begin(), b.support_.end(),
                                  std::back_inserter(r.support_));
    return r;
  }

  friend bool operator==(const Z2Hom&, const Z2Hom&) = default;

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < support_.size(); ++i) s += (i ? "," : "") + std::to_string(support_[i]);
    return s + "}";
  }

private:
  std::vector<std::int64_t> support_;
};

namespace detail {
// Tabulate a pointwise formula over [-r, r] \ {0}.
template <class F>
Z2Hom tabulate(std::int64_t r, F&& f) {
  std::vector<std::int64_t> s;
  for (std::int64_t i = -r; i <= r; ++i)
    if (i != 0 && f(i)) s.push_back(i);
  return Z2Hom(std::move(s));
}
}  // namespace detail

inline Z2Hom psi_star(const Z2Hom& h) {
  return detail::tabulate(h.radius() + 2, [&](std::int64_t i) -> bool {
    if (i < 0) return h(i);
    if (i == 1) return h(1) ^ h(-2);
    if (i == 2) return h(2) ^ h(-2) ^ h(-3);
    return h(i) ^ h(-i - 1) ^ h(-i) ^ h(-i + 1);
  });
}

inline Z2Hom rho_star(const Z2Hom& h) {
  std::vector<std::int64_t> s;
  for (auto i : h.support()) s.push_back(-i);
  return Z2Hom(std::move(s));
}

enum class Generator { Psi, Rho };

inline Z2Hom generator_action(const Z2Hom& h, Generator g) { return g == Generator::Psi ? psi_star(h) : rho_star(h); }

// Translation by one on the coding walk, tabulated directly.
inline Z2Hom tau_plus(const Z2Hom& h) {
  return detail::tabulate(h.radius() + 2, [&](std::int64_t i) -> bool {
    if (i > 0) return h(-i);
    if (i == -1) return h(1) ^ h(-2);
    if (i == -2) return h(2) ^ h(-2) ^ h(-3);
    return h(-i) ^ h(i - 1) ^ h(i) ^ h(i + 1);
  });
}

inline Z2Hom tau_minus(const Z2Hom& h) {
  return detail::tabulate(h.radius() + 2, [&](std::int64_t i) -> bool {
    if (i < 0) return h(-i);
    if (i == 1) return h(-1) ^ h(2);
    if (i == 2) return h(-2) ^ h(2) ^ h(3);
    return h(-i) ^ h(i - 1) ^ h(i) ^ h(i + 1);
  });
}

inline Z2Hom tau_star(Z2Hom h, std::int64_t m) {
  for (; m > 0; --m) h = tau_plus(h);
  for (; m < 0; ++m) h = tau_minus(h);
  return h;
}

// Smallest |i| in the support; empty for h = 0 (proximity infinity).
inline std::optional<std::uint64_t> proximity(const Z2Hom& h) {
  if (h.is_zero()) return std::nullopt;
  std::uint64_t p = UINT64_MAX;
  for (auto i : h.support()) p = std::min(p, static_cast<std::uint64_t>(i < 0 ? -i : i));
  return p;
}

inline bool cylinder_member(const Z2Hom& h, std::int64_t k) {
  if (k < 0) fail(ErrorKind::Precondition, "cylinder index must be nonnegative");
  if (!h(k) || !h(-k - 1)) return false;
  for (auto i : h.support())
    if (i > -k - 1 && i < k) return false;
  return true;
}

inline bool is_connected_double(const Z2Hom& h) { return !h.is_zero(); }

struct CylinderLemmaReport {
  std::uint64_t k = 0;
  bool in_cylinder = false;
  std::vector<int> clauses;  // which of (1), (2), (3) applied
  bool passed = true;
  std::string witness;
};

inline CylinderLemmaReport cylinder_lemma_check(const Z2Hom& h) {
  auto p = proximity(h);
  if (!p || *p < 2) fail(ErrorKind::Precondition, "cylinder lemma needs proximity at least 2");
  CylinderLemmaReport r;
  r.k = *p;
  const auto k = static_cast<std::int64_t>(*p);
  r.in_cylinder = cylinder_member(h, k);
  auto fail_with = [&](const std::string& w) {
    r.passed = false;
    if (!r.witness.empty()) r.witness += "; ";
    r.witness += w;
  };
  if (r.in_cylinder) {
    r.clauses.push_back(1);
    auto t = tau_plus(h);
    if (proximity(t) != static_cast<std::uint64_t>(k + 1)) fail_with("(1) tau h = " + t.to_string());
    if (k >= 3) {
      r.clauses.push_back(2);
      auto u = tau_minus(h);
      if (!cylinder_member(u, k - 1)) fail_with("(2) tau^-1 h = " + u.to_string());
    }
  } else {
    r.clauses.push_back(3);
    auto t1 = tau_plus(h);
    auto t2 = tau_plus(t1);
    auto ok = [&](const Z2Hom& t) {
      return proximity(t) == static_cast<std::uint64_t>(k - 1) && !cylinder_member(t, k - 1);
    };
    if (!ok(t1) && !ok(t2)) fail_with("(3) tau h = " + t1.to_string() + ", tau^2 h = " + t2.to_string());
  }
  return r;
}

// Finds h with h = f on {2..K} and tau^m h in C_{k+m} for 0 <= m <= M,
// k = min supp f, by Gaussian elimination over F_2. Free coordinates are 0.
inline Z2Hom z_solve(const std::vector<std::int64_t>& f_support, std::int64_t K, unsigned M) {
  std::set<std::int64_t> f(f_support.begin(), f_support.end());
  if (f.empty()) fail(ErrorKind::Precondition, "f must not be identically zero");
  for (auto i : f)
    if (i < 2 || i > K) fail(ErrorKind::Precondition, "f is defined on {2..K}; got index " + std::to_string(i));
  const std::int64_t k = *f.begin();
  // tau moves coordinates by at most one per step, so unknowns beyond
  // k + 2M + 2 cannot reach any constrained coordinate
  const std::int64_t R = std::max(K, k + 2 * static_cast<std::int64_t>(M) + 2);
  std::vector<std::int64_t> unknowns;
  for (std::int64_t j = -R; j <= R; ++j)
    if (j != 0) unknowns.push_back(j);
  const std::size_t nvar = unknowns.size();
  const std::size_t words = (nvar + 1 + 63) / 64;  // last bit is the right-hand side
  using Row = std::vector<std::uint64_t>;
  auto set_bit = [](Row& r, std::size_t b) { r[b / 64] ^= std::uint64_t{1} << (b % 64); };
  auto get_bit = [](const Row& r, std::size_t b) { return (r[b / 64] >> (b % 64)) & 1u; };

  // coordinate (m, i) of tau^m(e_j), collected per column
  struct Key {
    unsigned m;
    std::int64_t i;
    bool operator<(const Key& o) const { return m != o.m ? m < o.m : i < o.i; }
  };
  std::vector<Key> keys;
  std::vector<bool> rhs;
  for (unsigned m = 0; m <= M; ++m) {
    const std::int64_t km = k + m;
    for (std::int64_t i = -km - 1; i <= km; ++i) {
      if (i == 0) continue;
      keys.push_back({m, i});
      rhs.push_back(i == km || i == -km - 1);
    }
  }
  std::vector<Row> rows(keys.size(), Row(words, 0));
  for (std::size_t c = 0; c < nvar; ++c) {
    Z2Hom v{unknowns[c]};
    for (unsigned m = 0; m <= M; ++m) {
      for (auto i : v.support()) {
        auto it = std::lower_bound(keys.begin(), keys.end(), Key{m, i});
        if (it != keys.end() && it->m == m && it->i == i) set_bit(rows[static_cast<std::size_t>(it - keys.begin())], c);
      }
      if (m < M) v = tau_plus(v);
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rhs[r]) set_bit(rows[r], nvar);
  for (std::int64_t i = 2; i <= K; ++i) {
    Row row(words, 0);
    set_bit(row, static_cast<std::size_t>(i + R - 1));  // unknowns index of i > 0
    if (f.count(i)) set_bit(row, nvar);
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < nvar && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !get_bit(rows[p], c)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && get_bit(rows[r], c))
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (get_bit(rows[r], nvar)) fail(ErrorKind::Infeasible, "no solution at horizon " + std::to_string(M));
  std::vector<std::int64_t> s;
  for (std::size_t r = 0; r < rank; ++r)
    if (get_bit(rows[r], nvar)) s.push_back(unknowns[pivot_col[r]]);
  return Z2Hom(std::move(s));
}

struct LimitVerdict {
  enum class Kind { ConvergesCertified, ProximityReturnedToOne, Undetermined };
  Kind kind = Kind::Undetermined;
  std::optional<std::uint64_t> k;  // cylinder level at m0; empty when h = 0
  std::uint64_t m0 = 0;
  std::uint64_t step = 0;  // last step with proximity 1
  std::uint64_t horizon = 0;

  friend bool operator==(const LimitVerdict&, const LimitVerdict&) = default;
};

inline const char* to_string(LimitVerdict::Kind k) {
  switch (k) {
    case LimitVerdict::Kind::ConvergesCertified: return "ConvergesCertified";
    case LimitVerdict::Kind::ProximityReturnedToOne: return "ProximityReturnedToOne";
    case LimitVerdict::Kind::Undetermined: return "Undetermined";
  }
  return "";
}

// Horizon evidence for tau^m h -> 0 as m -> +infinity. A certified run must
// cover at least two consecutive steps.
inline LimitVerdict limits_to_zero(const Z2Hom& h, unsigned M) {
  if (M < 1) fail(ErrorKind::Precondition, "limits_to_zero needs horizon at least 1");
  LimitVerdict v;
  v.horizon = M;
  if (h.is_zero()) {
    v.kind = LimitVerdict::Kind::ConvergesCertified;
    return v;
  }
  std::vector<Z2Hom> seq{h};
  for (unsigned m = 1; m <= M; ++m) seq.push_back(tau_plus(seq.back()));
  // run[m]: h_m .. h_M walk up the cylinders from level P(h_m)
  std::optional<std::uint64_t> best;
  for (std::int64_t m = M; m >= 0; --m) {
    auto p = proximity(seq[m]);
    if (!p || *p < 2) break;
    bool ok = true;
    for (std::uint64_t j = static_cast<std::uint64_t>(m); j <= M && ok; ++j)
      ok = cylinder_member(seq[j], static_cast<std::int64_t>(*p + (j - static_cast<std::uint64_t>(m))));
    if (!ok) break;
    best = static_cast<std::uint64_t>(m);
  }
  if (best && *best < M) {
    v.kind = LimitVerdict::Kind::ConvergesCertified;
    v.m0 = *best;
    v.k = proximity(seq[*best]);
    return v;
  }
  for (std::uint64_t m = 0; m <= M; ++m)
    if (proximity(seq[m]) == std::uint64_t{1}) {
      v.kind = LimitVerdict::Kind::ProximityReturnedToOne;
      v.step = m;
    }
  return v;
}

}  // namespace coverflow::ladder
