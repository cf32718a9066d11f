#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coverflow/permutation.hpp"

namespace coverflow {

// Words in the free group on generators gamma_n, n in Z.
struct Letter {
  std::int64_t gen = 0;
  int exp = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l.exp = -l.exp;
  return out;
}

inline Word letter(std::int64_t gen, int exp = 1) { return Word{Letter{gen, exp}}; }

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += ' ';
    s += "g" + std::to_string(l.gen);
    if (l.exp < 0) s += "^-1";
  }
  return s;
}

using Substitution = std::function<Word(std::int64_t)>;

// Replace every letter by its image (inverted for negative exponents), reduced.
inline Word substitute(const Word& w, const Substitution& sub) {
  Word out;
  for (const auto& l : w) {
    Word img = sub(l.gen);
    if (l.exp < 0) img = inverse(img);
    for (const auto& x : img) {
      if (!out.empty() && out.back().gen == x.gen && out.back().exp == -x.exp)
        out.pop_back();
      else
        out.push_back(x);
    }
  }
  return out;
}

// Evaluate under a homomorphism given on generators.
inline Permutation evaluate(const Word& w, const std::function<Permutation(std::int64_t)>& h, std::size_t d) {
  Permutation r = Permutation::identity(d);
  for (const auto& l : w) r *= l.exp > 0 ? h(l.gen) : h(l.gen).inverse();
  return r;
}

enum class PhiDirection { Forward, Inverse };

// Action of the pseudo-Anosov phi (Forward) or its inverse on the generators.
inline Substitution phi_generator_action(PhiDirection dir) {
  if (dir == PhiDirection::Inverse) {
    return [](std::int64_t n) -> Word {
      if (n < 0) return {{n + 1, 1}, {1, -1}};
      if (n == 0) return {{1, 1}};
      return {{1, 1}, {n + 1, 1}};
    };
  }
  return [](std::int64_t n) -> Word {
    if (n <= 0) return {{n - 1, 1}, {0, 1}};
    if (n == 1) return {{0, 1}};
    return {{0, -1}, {n - 1, 1}};
  };
}

}  // namespace coverflow
