#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "coverflow/error.hpp"
#include "coverflow/group.hpp"
#include "coverflow/permutation.hpp"
#include "coverflow/rng.hpp"

namespace coverflow {

// Generator index -> permutation. Unlisted indices carry the default.
class MonodromyRep {
public:
  explicit MonodromyRep(std::size_t d = 1) : d_(d), default_(Permutation::identity(d)) {}

  MonodromyRep(std::size_t d, std::map<std::int64_t, Permutation> assignments) : MonodromyRep(d) {
    for (auto& [i, p] : assignments) assign(i, std::move(p));
  }

  std::size_t degree() const noexcept { return d_; }

  void assign(std::int64_t index, Permutation p) {
    if (p.degree() != d_)
      fail(ErrorKind::DegreeMismatch, "assignment at index " + std::to_string(index) + " has degree " +
                                          std::to_string(p.degree()) + ", expected " + std::to_string(d_));
    assignments_.insert_or_assign(index, std::move(p));
  }

  const Permutation& at(std::int64_t index) const {
    auto it = assignments_.find(index);
    return it == assignments_.end() ? default_ : it->second;
  }

  const std::map<std::int64_t, Permutation>& assignments() const noexcept { return assignments_; }

  // indices whose value differs from the default
  std::vector<std::int64_t> support() const {
    std::vector<std::int64_t> s;
    for (const auto& [i, p] : assignments_)
      if (p != default_) s.push_back(i);
    return s;
  }

  std::vector<Permutation> images() const {
    std::vector<Permutation> r;
    for (const auto& [i, p] : assignments_) r.push_back(p);
    return r;
  }

  // equality of the functions, not of the listings
  friend bool operator==(const MonodromyRep& a, const MonodromyRep& b) {
    if (a.d_ != b.d_) return false;
    std::set<std::int64_t> keys;
    for (const auto& [i, p] : a.assignments_) keys.insert(i);
    for (const auto& [i, p] : b.assignments_) keys.insert(i);
    return std::all_of(keys.begin(), keys.end(), [&](std::int64_t i) { return a.at(i) == b.at(i); });
  }

private:
  std::size_t d_;
  Permutation default_;
  std::map<std::int64_t, Permutation> assignments_;
};

inline Transitivity rep_transitivity(const MonodromyRep& h) { return is_transitive(h.images(), h.degree()); }

inline MonodromyRep sample_monodromy(const FiniteGroup& g, const std::vector<std::int64_t>& support, Rng& rng) {
  MonodromyRep h(g.degree());
  for (auto i : support) h.assign(i, g[rng.below(g.order())]);
  return h;
}

inline MonodromyRep sample_monodromy(const SubgroupSpec& g, const std::vector<std::int64_t>& support, std::uint64_t seed) {
  Rng rng(seed, "sample_monodromy");
  return sample_monodromy(FiniteGroup(g), support, rng);
}

// Searches all of Pi_d for a simultaneous conjugator; fine for d <= 8.
inline std::optional<Permutation> find_conjugator(const MonodromyRep& h1, const MonodromyRep& h2) {
  if (h1.degree() != h2.degree())
    fail(ErrorKind::DegreeMismatch, "covers of different degree cannot be compared");
  const std::size_t d = h1.degree();
  std::set<std::int64_t> keys;
  for (const auto& [i, p] : h1.assignments()) keys.insert(i);
  for (const auto& [i, p] : h2.assignments()) keys.insert(i);
  std::vector<std::pair<Permutation, Permutation>> pairs;
  for (auto i : keys) pairs.emplace_back(h1.at(i), h2.at(i));

  std::vector<Permutation::point_type> img(d);
  std::iota(img.begin(), img.end(), 1u);
  do {
    Permutation sigma = Permutation::from_images(img);
    Permutation sigma_inv = sigma.inverse();
    bool ok = std::all_of(pairs.begin(), pairs.end(),
                          [&](const auto& pr) { return sigma_inv * pr.first * sigma == pr.second; });
    if (ok) return sigma;
  } while (std::next_permutation(img.begin(), img.end()));
  return std::nullopt;
}

inline bool covers_isomorphic(const MonodromyRep& h1, const MonodromyRep& h2) {
  return find_conjugator(h1, h2).has_value();
}

struct DisconnectedProbability {
  std::optional<mpq_class> exact;  // empty when |G|^k exceeds the cap
  mpq_class bound;                 // sum over maximal non-transitive H of (|H|/|G|)^k
  std::vector<std::vector<Permutation>> maximal_nontransitive;
  bool cap_exceeded = false;
};

inline mpq_class rational_pow(const mpq_class& x, unsigned k) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

inline DisconnectedProbability disconnected_probability(const SubgroupSpec& spec, unsigned k,
                                                        std::uint64_t enumeration_cap = 10'000'000) {
  FiniteGroup g(spec);
  const std::size_t n = g.order();
  DisconnectedProbability out;

  auto subs = all_subgroups(g);
  std::vector<const SubgroupMask*> nontrans;
  for (const auto& s : subs)
    if (!is_transitive(mask_elements(g, s), g.degree()).transitive) nontrans.push_back(&s);
  auto contained = [](const SubgroupMask& a, const SubgroupMask& b) {
    for (std::size_t i = 0; i < a.member.size(); ++i)
      if (a.member[i] && !b.member[i]) return false;
    return true;
  };
  for (const auto* h : nontrans) {
    bool maximal = std::none_of(nontrans.begin(), nontrans.end(), [&](const SubgroupMask* o) {
      return o != h && o->order > h->order && contained(*h, *o);
    });
    if (!maximal) continue;
    out.maximal_nontransitive.push_back(mask_elements(g, *h));
    out.bound += rational_pow(mpq_class(static_cast<unsigned long>(h->order), static_cast<unsigned long>(n)), k);
  }

  // |G|^k against the cap without overflow
  std::uint64_t total = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (total > enumeration_cap / n) {
      out.cap_exceeded = true;
      return out;
    }
    total *= n;
  }

  // odometer over k-tuples; orbit test by union-find on the tuple
  std::vector<std::size_t> tuple(k, 0);
  std::uint64_t bad = 0;
  const std::size_t d = g.degree();
  std::vector<std::uint32_t> parent(d);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint64_t t = 0; t < total; ++t) {
    std::iota(parent.begin(), parent.end(), 0u);
    std::size_t blocks = d;
    for (auto e : tuple)
      for (std::uint32_t x = 0; x < d; ++x) {
        auto a = find(x), b = find(g[e].image0(x));
        if (a != b) {
          parent[a] = b;
          --blocks;
        }
      }
    if (blocks > 1) ++bad;
    for (std::size_t j = 0; j < k; ++j) {
      if (++tuple[j] < n) break;
      tuple[j] = 0;
    }
  }
  mpq_class p(mpz_class(std::to_string(bad)), mpz_class(std::to_string(total)));
  p.canonicalize();
  out.exact = p;
  return out;
}

}  // namespace coverflow
