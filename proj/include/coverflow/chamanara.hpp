#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "coverflow/error.hpp"
#include "coverflow/group.hpp"
#include "coverflow/monodromy.hpp"
#include "coverflow/odometer.hpp"
#include "coverflow/rng.hpp"

namespace coverflow {

// How the zero blocks continue past the supplied lengths.
struct ZeroBlockRule {
  enum class Kind { Terminal, Linear, Repeat };
  Kind kind = Kind::Linear;
  std::uint64_t value = 0;  // block length for Repeat

  friend bool operator==(const ZeroBlockRule&, const ZeroBlockRule&) = default;
};

// p = 1^{L1} 0^{l1} 2^{L2} 0^{l2} 1^{L1} 0^{l3} ... starting at index `start`.
// Terminal: p is 0 after the last supplied zero block.
// Linear:   l_i = i for every i past the supplied list.
// Repeat:   l_i = value for every i past the supplied list.
struct PWord {
  std::int64_t start = 1;
  std::uint64_t L1 = 1, L2 = 1;
  std::vector<std::uint64_t> ells;
  ZeroBlockRule rule;

  std::uint64_t ell(std::size_t i) const {  // 1-based block number
    if (i <= ells.size()) return ells[i - 1];
    switch (rule.kind) {
      case ZeroBlockRule::Kind::Linear: return i;
      case ZeroBlockRule::Kind::Repeat: return rule.value;
      case ZeroBlockRule::Kind::Terminal: break;
    }
    return UINT64_MAX;
  }

  bool divergent() const { return rule.kind == ZeroBlockRule::Kind::Linear; }

  // length of the part fixed by the supplied lengths
  std::uint64_t finite_length() const {
    std::uint64_t n = 0;
    for (std::size_t i = 1; i <= ells.size(); ++i) n += (i % 2 ? L1 : L2) + ells[i - 1];
    return n;
  }

  struct Position {
    unsigned symbol = 0;
    std::uint64_t offset = 0;  // offset inside the maximal block
    std::uint64_t length = 0;  // block length, UINT64_MAX if unbounded
  };

  Position locate(std::int64_t n) const {
    if (n < start) fail(ErrorKind::Precondition, "p is defined only from index " + std::to_string(start));
    std::uint64_t t = static_cast<std::uint64_t>(n - start);
    for (std::size_t i = 1;; ++i) {
      if (rule.kind == ZeroBlockRule::Kind::Terminal && i > ells.size()) return {0, t, UINT64_MAX};
      std::uint64_t b = i % 2 ? L1 : L2;
      if (t < b) return {static_cast<unsigned>(i % 2 ? 1 : 2), t, b};
      t -= b;
      std::uint64_t z = ell(i);
      if (z == UINT64_MAX || t < z) return {0, t, z};
      t -= z;
    }
  }

  unsigned operator()(std::int64_t n) const { return locate(n).symbol; }

  std::vector<unsigned> symbols(std::uint64_t length) const {
    std::vector<unsigned> s;
    for (std::uint64_t i = 0; i < length; ++i) s.push_back((*this)(start + static_cast<std::int64_t>(i)));
    return s;
  }

  friend bool operator==(const PWord&, const PWord&) = default;
};

inline PWord build_p_word(std::uint64_t L1, std::uint64_t L2, std::vector<std::uint64_t> ells,
                          ZeroBlockRule rule = {}, std::int64_t start = 1) {
  if (L1 < 1 || L2 < 1) fail(ErrorKind::Precondition, "block lengths L1, L2 must be at least 1");
  for (std::size_t i = 0; i < ells.size(); ++i)
    if (ells[i] == 0)
      fail(ErrorKind::Precondition, "zero block " + std::to_string(i + 1) +
                                        " has length 0: a 1-block would touch a 2-block (p(n)+p(n+1)=3)");
  if (rule.kind == ZeroBlockRule::Kind::Repeat && rule.value == 0)
    fail(ErrorKind::Precondition, "repeated zero-block length must be at least 1");
  return PWord{start, L1, L2, std::move(ells), rule};
}

// Continuation of a p-ready sequence past its window.
struct PSchedule {
  PWord p;
  std::int64_t origin = 0;  // p-index of tail offset 0
  std::vector<Permutation> fill1, fill2;
  std::vector<Permutation> H1, H2;  // element lists, sorted

  friend bool operator==(const PSchedule&, const PSchedule&) = default;
};

struct TailRule {
  enum class Kind { Constant, Periodic, HLister, PSchedule };
  Kind kind = Kind::Constant;
  Permutation constant;
  std::vector<Permutation> word;  // periodic word, or the enumeration of H
  std::optional<coverflow::PSchedule> schedule;

  static TailRule identity(std::size_t d) {
    TailRule t;
    t.constant = Permutation::identity(d);
    return t;
  }
  static TailRule constant_of(Permutation p) {
    TailRule t;
    t.constant = std::move(p);
    return t;
  }
  static TailRule periodic(std::vector<Permutation> w) {
    if (w.empty()) fail(ErrorKind::Precondition, "periodic tail needs a nonempty word");
    TailRule t;
    t.kind = Kind::Periodic;
    t.constant = Permutation::identity(w.front().degree());
    t.word = std::move(w);
    return t;
  }
  // H listed in sorted order; H must be closed
  static TailRule hlister(std::vector<Permutation> h) {
    if (h.empty()) fail(ErrorKind::Precondition, "HLister needs a nonempty subgroup");
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    if (generated_subgroup(h, h.front().degree()) != h)
      fail(ErrorKind::Precondition, "HLister element list is not a subgroup");
    TailRule t;
    t.kind = Kind::HLister;
    t.constant = Permutation::identity(h.front().degree());
    t.word = std::move(h);
    return t;
  }
  static TailRule p_schedule(coverflow::PSchedule s, std::size_t d) {
    TailRule t;
    t.kind = Kind::PSchedule;
    t.constant = Permutation::identity(d);
    t.schedule = std::move(s);
    return t;
  }

  Permutation at(std::uint64_t offset) const {
    switch (kind) {
      case Kind::Constant: return constant;
      case Kind::Periodic:
      case Kind::HLister: return word[offset % word.size()];
      case Kind::PSchedule: {
        const auto& s = *schedule;
        auto pos = s.p.locate(s.origin + static_cast<std::int64_t>(offset));
        const auto& fill = pos.symbol == 1 ? s.fill1 : s.fill2;
        if (pos.symbol == 0 || fill.empty()) return constant;
        return fill[pos.offset % fill.size()];
      }
    }
    return constant;
  }

  // values taken infinitely often
  std::vector<Permutation> recurring_values() const {
    std::set<Permutation> v;
    switch (kind) {
      case Kind::Constant: v.insert(constant); break;
      case Kind::Periodic:
      case Kind::HLister: v.insert(word.begin(), word.end()); break;
      case Kind::PSchedule:
        v.insert(constant);
        v.insert(schedule->fill1.begin(), schedule->fill1.end());
        v.insert(schedule->fill2.begin(), schedule->fill2.end());
        break;
    }
    return {v.begin(), v.end()};
  }

  friend bool operator==(const TailRule&, const TailRule&) = default;
};

// Bi-infinite sequence g_m: a window [a, a+len) plus symbolic tails that
// run outward from the window edges.
class GSequence {
public:
  GSequence() = default;
  GSequence(std::size_t d, std::int64_t window_start, std::vector<Permutation> window, TailRule left, TailRule right)
      : d_(d), a_(window_start), window_(std::move(window)), left_(std::move(left)), right_(std::move(right)) {
    require_same_degree(window_, d_);
    check_tail(left_, "left");
    check_tail(right_, "right");
    if (left_.kind == TailRule::Kind::PSchedule) fail(ErrorKind::Precondition, "p-schedule tails run to the right only");
  }

  static GSequence trivial(std::size_t d) { return GSequence(d, 0, {}, TailRule::identity(d), TailRule::identity(d)); }

  std::size_t degree() const noexcept { return d_; }
  std::int64_t window_start() const noexcept { return a_; }
  std::int64_t window_end() const noexcept { return a_ + static_cast<std::int64_t>(window_.size()); }  // exclusive
  const std::vector<Permutation>& window() const noexcept { return window_; }
  const TailRule& left_tail() const noexcept { return left_; }
  const TailRule& right_tail() const noexcept { return right_; }

  Permutation operator[](std::int64_t m) const {
    if (m < a_) return left_.at(static_cast<std::uint64_t>(a_ - 1 - m));
    if (m >= window_end()) return right_.at(static_cast<std::uint64_t>(m - window_end()));
    return window_[static_cast<std::size_t>(m - a_)];
  }

  GSequence shifted(std::int64_t m) const {
    GSequence g = *this;
    g.a_ -= m;
    return g;
  }

  friend bool operator==(const GSequence&, const GSequence&) = default;

private:
  void check_tail(const TailRule& t, const char* side) const {
    auto vals = t.recurring_values();
    for (const auto& p : vals)
      if (p.degree() != d_) fail(ErrorKind::DegreeMismatch, std::string(side) + " tail has the wrong degree");
  }

  std::size_t d_ = 1;
  std::int64_t a_ = 0;
  std::vector<Permutation> window_;
  TailRule left_ = TailRule::identity(1);
  TailRule right_ = TailRule::identity(1);
};

// g'_n = g_{n+m}
inline GSequence shift(const GSequence& g, std::int64_t m) { return g.shifted(m); }

// h o phi^{-k} (gamma_n) from the G-sequence alone.
inline Permutation eval_cover_hom(const GSequence& g, std::int64_t k, std::int64_t n) {
  if (n == 1) return g[k];
  if (n == 0) return g[k - 1];
  Permutation r = Permutation::identity(g.degree());
  if (n > 1) {
    for (std::int64_t i = k; i <= k + n - 2; ++i) r *= g[i].inverse();
    return r * g[k + n - 1];
  }
  r = g[k + n - 1];
  for (std::int64_t i = k + n; i <= k - 1; ++i) r *= g[i].inverse();
  return r;
}

// Every value of g that occurs anywhere.
inline std::vector<Permutation> all_values(const GSequence& g) {
  std::set<Permutation> v(g.window().begin(), g.window().end());
  for (const auto& p : g.left_tail().recurring_values()) v.insert(p);
  for (const auto& p : g.right_tail().recurring_values()) v.insert(p);
  return {v.begin(), v.end()};
}

struct DeviousReport {
  std::int64_t K = 0;
  std::vector<Permutation> H;
};

struct DeviousCheck {
  std::optional<DeviousReport> devious;
  bool connected = false;
};

inline DeviousCheck is_devious(const GSequence& g) {
  DeviousCheck out;
  out.connected = is_transitive(all_values(g), g.degree()).transitive;
  auto h = generated_subgroup(g.right_tail().recurring_values(), g.degree());
  if (is_transitive(h, g.degree()).transitive) return out;
  std::int64_t K = g.window_end();
  while (K > g.window_start() && std::binary_search(h.begin(), h.end(), g[K - 1])) --K;
  out.devious = DeviousReport{K, std::move(h)};
  return out;
}

inline GSequence build_devious(const SubgroupSpec& G, const SubgroupSpec& H, std::vector<Permutation> prefix,
                               std::uint64_t seed, std::size_t random_prefix = 0, std::int64_t window_start = 0,
                               bool require_connected = false) {
  if (G.d != H.d) fail(ErrorKind::DegreeMismatch, "G and H have different degrees");
  FiniteGroup g(G);
  auto h = generated_subgroup(H.generators, H.d);
  if (!is_subset_sorted(h, g.elements())) fail(ErrorKind::Infeasible, "H is not a subgroup of <G>");
  if (is_transitive(h, H.d).transitive) fail(ErrorKind::Infeasible, "H acts transitively; a devious tail needs a non-transitive H");
  require_same_degree(prefix, G.d);
  for (const auto& p : prefix)
    if (!g.contains(p)) fail(ErrorKind::Infeasible, "prefix entry " + p.to_string() + " is not in <G>");
  Rng rng(seed, "build_devious");
  for (std::size_t i = 0; i < random_prefix; ++i) prefix.push_back(g[rng.below(g.order())]);
  GSequence out(G.d, window_start, std::move(prefix), TailRule::identity(G.d), TailRule::hlister(h));
  if (require_connected && !is_devious(out).connected)
    fail(ErrorKind::Infeasible, "prefix together with H does not act transitively");
  return out;
}

struct PReadyViolation {
  std::int64_t index = 0;
  std::string reason;
};

// Checks both p-ready clauses on indices [p.start, p.start + length).
inline std::optional<PReadyViolation> verify_p_ready(const GSequence& g, const PWord& p, const std::vector<Permutation>& H1,
                                                     const std::vector<Permutation>& H2, std::uint64_t length) {
  auto in = [](const std::vector<Permutation>& h, const Permutation& x) { return std::binary_search(h.begin(), h.end(), x); };
  std::int64_t end = p.start + static_cast<std::int64_t>(length);
  for (std::int64_t n = p.start; n < end;) {
    auto pos = p.locate(n);
    if (pos.symbol == 0) {
      if (!in(H1, g[n]) || !in(H2, g[n])) return PReadyViolation{n, "p(n)=0 but g_n is outside H1 and H2's intersection"};
      ++n;
      continue;
    }
    const auto& H = pos.symbol == 1 ? H1 : H2;
    std::int64_t first = n - static_cast<std::int64_t>(pos.offset);
    std::vector<Permutation> block;
    for (std::uint64_t j = 0; j < pos.length; ++j) {
      auto x = g[first + static_cast<std::int64_t>(j)];
      if (!in(H, x)) return PReadyViolation{first + static_cast<std::int64_t>(j), "g_n is outside H_{p(n)}"};
      block.push_back(x);
    }
    if (generated_subgroup(block, g.degree()) != H)
      return PReadyViolation{first, "block does not generate H_" + std::to_string(pos.symbol)};
    n = first + static_cast<std::int64_t>(pos.length);
  }
  return std::nullopt;
}

inline GSequence build_p_ready(const PWord& p, const SubgroupSpec& H1, const SubgroupSpec& H2, const SubgroupSpec& G,
                               std::uint64_t seed, std::uint64_t verify_extra = 256) {
  if (H1.d != G.d || H2.d != G.d) fail(ErrorKind::DegreeMismatch, "H1, H2 and G must share a degree");
  const std::size_t d = G.d;
  FiniteGroup g(G);
  auto h1 = generated_subgroup(H1.generators, d);
  auto h2 = generated_subgroup(H2.generators, d);
  if (!is_subset_sorted(h1, g.elements())) fail(ErrorKind::Infeasible, "H1 is not a subgroup of <G>");
  if (!is_subset_sorted(h2, g.elements())) fail(ErrorKind::Infeasible, "H2 is not a subgroup of <G>");

  Rng rng(seed, "build_p_ready");
  auto pick = [&](const std::vector<Permutation>& h) {
    auto sets = minimal_generating_sets(h, d);
    return sets[rng.below(sets.size())];
  };
  auto fill1 = pick(h1);
  auto fill2 = pick(h2);
  if (p.L1 < fill1.size())
    fail(ErrorKind::Infeasible, "1-block at index " + std::to_string(p.start) + " has length " + std::to_string(p.L1) +
                                    " but H1 needs " + std::to_string(fill1.size()) + " generators");
  if (p.L2 < fill2.size())
    fail(ErrorKind::Infeasible, "2-block at index " + std::to_string(p.start + static_cast<std::int64_t>(p.L1 + p.ell(1))) +
                                    " has length " + std::to_string(p.L2) + " but H2 needs " +
                                    std::to_string(fill2.size()) + " generators");

  PSchedule sched{p, p.start, fill1, fill2, h1, h2};
  TailRule full = TailRule::p_schedule(sched, d);
  std::uint64_t len = p.finite_length();
  std::vector<Permutation> window;
  for (std::uint64_t i = 0; i < len; ++i) window.push_back(full.at(i));
  TailRule right = TailRule::identity(d);
  if (p.rule.kind != ZeroBlockRule::Kind::Terminal) {
    sched.origin = p.start + static_cast<std::int64_t>(len);
    right = TailRule::p_schedule(sched, d);
  }
  GSequence out(d, p.start, std::move(window), TailRule::identity(d), std::move(right));
  if (auto bad = verify_p_ready(out, p, h1, h2, len + verify_extra))
    fail(ErrorKind::Infeasible, "p-ready check failed at index " + std::to_string(bad->index) + ": " + bad->reason);
  return out;
}

struct AccumulationClass {
  enum class Kind { AllDisconnected, HasConnectedLimit, Undetermined };
  Kind kind = Kind::Undetermined;
  std::vector<std::vector<Permutation>> subgroups;  // for AllDisconnected
  std::string reason;
};

inline AccumulationClass accumulation_class(const GSequence& g) {
  using K = AccumulationClass::Kind;
  const std::size_t d = g.degree();
  const auto& t = g.right_tail();
  auto periodic_case = [&](const std::vector<Permutation>& values, const char* why) {
    auto h = generated_subgroup(values, d);
    if (is_transitive(h, d).transitive) return AccumulationClass{K::HasConnectedLimit, {}, why};
    return AccumulationClass{K::AllDisconnected, {h}, why};
  };
  if (t.kind != TailRule::Kind::PSchedule)
    return periodic_case(t.recurring_values(), "accumulation points are shifts of the periodic tail");

  const auto& s = *t.schedule;
  if (generated_subgroup(s.fill1, d) != s.H1 || generated_subgroup(s.fill2, d) != s.H2)
    return {K::Undetermined, {}, "schedule fills do not generate the declared H1, H2"};
  if (s.p.rule.kind == ZeroBlockRule::Kind::Repeat)
    return periodic_case(t.recurring_values(), "bounded zero blocks: the tail is periodic");
  if (s.p.rule.kind == ZeroBlockRule::Kind::Linear) {
    bool t1 = is_transitive(s.H1, d).transitive, t2 = is_transitive(s.H2, d).transitive;
    if (t1 || t2) return {K::HasConnectedLimit, {}, "a block subgroup acts transitively"};
    return {K::AllDisconnected, {s.H1, s.H2}, "zero-block lengths tend to infinity"};
  }
  return {K::Undetermined, {}, "unrecognised schedule"};
}

inline SkewCocycle to_skew(const GSequence& g, std::int64_t k, std::size_t horizon = 64) {
  MonodromyRep psi(g.degree());
  for (std::size_t j = 1; j <= horizon; ++j) psi.assign(static_cast<std::int64_t>(j), eval_cover_hom(g, k, static_cast<std::int64_t>(j)));
  return SkewCocycle(2, std::move(psi));
}

}  // namespace coverflow
