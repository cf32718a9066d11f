#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "coverflow/error.hpp"
#include "coverflow/permutation.hpp"

namespace coverflow {

struct SubgroupSpec {
  std::size_t d = 1;
  std::vector<Permutation> generators;

  SubgroupSpec() = default;
  SubgroupSpec(std::size_t degree, std::vector<Permutation> gens) : d(degree), generators(std::move(gens)) {
    require_same_degree(generators, d);
  }

  static SubgroupSpec trivial(std::size_t d) { return SubgroupSpec(d, {}); }
};

using Partition = std::vector<std::vector<std::uint32_t>>;  // 1-based blocks, sorted

// Closure of gens under composition, sorted. The empty set in degree d
// generates the trivial group.
inline std::vector<Permutation> generated_subgroup(const std::vector<Permutation>& gens, std::size_t d) {
  require_same_degree(gens, d);
  std::set<Permutation> seen{Permutation::identity(d)};
  std::deque<Permutation> frontier{Permutation::identity(d)};
  while (!frontier.empty()) {
    Permutation x = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      Permutation y = x * g;
      if (seen.insert(y).second) frontier.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<Permutation> generated_subgroup(const std::vector<Permutation>& gens) {
  if (gens.empty()) fail(ErrorKind::Precondition, "generated_subgroup needs at least one generator to fix the degree");
  return generated_subgroup(gens, gens.front().degree());
}

inline std::vector<Permutation> elements(const SubgroupSpec& g) { return generated_subgroup(g.generators, g.d); }

struct Transitivity {
  bool transitive = false;
  Partition orbits;
};

inline Transitivity is_transitive(const std::vector<Permutation>& gens, std::size_t d) {
  require_same_degree(gens, d);
  std::vector<std::uint32_t> label(d, UINT32_MAX);
  Partition blocks;
  for (std::uint32_t s = 0; s < d; ++s) {
    if (label[s] != UINT32_MAX) continue;
    auto id = static_cast<std::uint32_t>(blocks.size());
    std::vector<std::uint32_t> block{s};
    label[s] = id;
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (const auto& g : gens) {
        std::uint32_t y = g.image0(block[i]);
        if (label[y] == UINT32_MAX) {
          label[y] = id;
          block.push_back(y);
        }
      }
    }
    std::sort(block.begin(), block.end());
    for (auto& x : block) ++x;
    blocks.push_back(std::move(block));
  }
  return {blocks.size() == 1, std::move(blocks)};
}

inline bool is_subset_sorted(const std::vector<Permutation>& small, const std::vector<Permutation>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Finite permutation group held as a sorted element list.
class FiniteGroup {
public:
  FiniteGroup(std::vector<Permutation> gens, std::size_t d)
      : d_(d), gens_(std::move(gens)), elems_(generated_subgroup(gens_, d)) {
    for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
  }

  explicit FiniteGroup(const SubgroupSpec& s) : FiniteGroup(s.generators, s.d) {}

  std::size_t degree() const noexcept { return d_; }
  std::size_t order() const noexcept { return elems_.size(); }
  const std::vector<Permutation>& elements() const noexcept { return elems_; }
  const std::vector<Permutation>& generators() const noexcept { return gens_; }
  const Permutation& operator[](std::size_t i) const { return elems_[i]; }

  bool contains(const Permutation& p) const { return index_.count(p) != 0; }
  std::size_t index_of(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) fail(ErrorKind::Precondition, "permutation " + p.to_string() + " is not in the group");
    return it->second;
  }

  bool transitive() const { return is_transitive(gens_, d_).transitive; }

private:
  std::size_t d_;
  std::vector<Permutation> gens_;
  std::vector<Permutation> elems_;
  std::map<Permutation, std::size_t> index_;
};

// One subgroup as a membership mask over the parent's element list.
struct SubgroupMask {
  std::vector<bool> member;
  std::vector<std::size_t> gens;  // indices into the parent
  std::size_t order = 0;
};

// Every subgroup of g, found by adjoining one element at a time.
// Sorted by order, then by element list.
inline std::vector<SubgroupMask> all_subgroups(const FiniteGroup& g, std::size_t max_order = 720) {
  if (g.order() > max_order)
    fail(ErrorKind::Infeasible, "subgroup enumeration capped at |G| <= " + std::to_string(max_order) +
                                    ", got " + std::to_string(g.order()));
  const std::size_t n = g.order();
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mul[i][j] = g.index_of(g[i] * g[j]);
  const std::size_t id = g.index_of(Permutation::identity(g.degree()));

  auto close = [&](const std::vector<std::size_t>& gens) {
    SubgroupMask s;
    s.member.assign(n, false);
    s.gens = gens;
    std::vector<std::size_t> list{id};
    s.member[id] = true;
    for (std::size_t i = 0; i < list.size(); ++i)
      for (auto x : gens) {
        auto y = mul[list[i]][x];
        if (!s.member[y]) {
          s.member[y] = true;
          list.push_back(y);
        }
      }
    s.order = list.size();
    return s;
  };

  std::set<std::vector<bool>> seen;
  std::vector<SubgroupMask> out;
  out.push_back(close({}));
  seen.insert(out.back().member);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      if (out[i].member[x]) continue;
      auto gens = out[i].gens;
      gens.push_back(x);
      auto s = close(gens);
      if (seen.insert(s.member).second) out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), [](const SubgroupMask& a, const SubgroupMask& b) {
    if (a.order != b.order) return a.order < b.order;
    return a.member > b.member;  // earlier elements first
  });
  return out;
}

inline std::vector<Permutation> mask_elements(const FiniteGroup& g, const SubgroupMask& m) {
  std::vector<Permutation> r;
  for (std::size_t i = 0; i < m.member.size(); ++i)
    if (m.member[i]) r.push_back(g[i]);
  return r;
}

// All generating sets of minimal size, each sorted, in lexicographic order.
// The trivial group is generated by the empty set.
inline std::vector<std::vector<Permutation>> minimal_generating_sets(const std::vector<Permutation>& h_elems,
                                                                     std::size_t d, std::size_t limit = 100000) {
  std::vector<Permutation> candidates;
  for (const auto& p : h_elems)
    if (!p.is_identity()) candidates.push_back(p);
  std::sort(candidates.begin(), candidates.end());
  if (candidates.empty()) return {{}};
  const std::size_t target = h_elems.size();
  for (std::size_t r = 1; r <= candidates.size(); ++r) {
    std::vector<std::vector<Permutation>> found;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    std::size_t tried = 0;
    for (;;) {
      std::vector<Permutation> pick;
      for (auto i : idx) pick.push_back(candidates[i]);
      if (generated_subgroup(pick, d).size() == target) found.push_back(pick);
      if (++tried > limit) break;
      std::size_t k = r;
      while (k > 0 && idx[k - 1] == candidates.size() - r + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found.empty()) return found;
  }
  fail(ErrorKind::Infeasible, "no generating set found");
}

// Group names accepted on the command line, all inside degree d:
//   "S<n>" symmetric on {1..n}; "C<n>" or "Z<n>" cyclic <(1 2 .. n)>;
//   "trivial"; or a ';'-separated list of permutations in cycle notation.
inline SubgroupSpec parse_group(const std::string& text, std::size_t d) {
  auto number_after = [&](std::size_t pos) -> std::size_t {
    if (pos >= text.size()) fail(ErrorKind::Parse, "missing size in group name: " + text);
    std::size_t n = 0;
    for (std::size_t i = pos; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail(ErrorKind::Parse, "bad group name: " + text);
      n = n * 10 + static_cast<std::size_t>(text[i] - '0');
      if (n > 64) fail(ErrorKind::Parse, "group size too large: " + text);
    }
    if (n < 1 || n > d) fail(ErrorKind::Parse, "group '" + text + "' does not fit in degree " + std::to_string(d));
    return n;
  };
  auto cycle_on = [&](std::size_t n) {
    std::vector<Permutation::point_type> img(d);
    std::iota(img.begin(), img.end(), 1u);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Permutation::point_type>((i + 1) % n + 1);
    return Permutation::from_images(img);
  };
  if (text == "trivial" || text == "1") return SubgroupSpec::trivial(d);
  if (!text.empty() && text.front() == '(') {
    std::vector<Permutation> gens;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find(';', start);
      if (end == std::string::npos) end = text.size();
      gens.push_back(Permutation::parse(std::string_view(text).substr(start, end - start), d));
      start = end + 1;
    }
    return SubgroupSpec(d, gens);
  }
  if (!text.empty() && (text[0] == 'C' || text[0] == 'Z')) return SubgroupSpec(d, {cycle_on(number_after(1))});
  if (!text.empty() && text[0] == 'S') {
    std::size_t n = number_after(1);
    if (n == 1) return SubgroupSpec::trivial(d);
    std::vector<Permutation> gens{cycle_on(n)};
    std::vector<Permutation::point_type> img(d);
    std::iota(img.begin(), img.end(), 1u);
    std::swap(img[0], img[1]);
    gens.push_back(Permutation::from_images(img));
    return SubgroupSpec(d, gens);
  }
  fail(ErrorKind::Parse, "unknown group: " + text);
}

}  // namespace coverflow
