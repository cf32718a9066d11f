#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "coverflow/error.hpp"

namespace coverflow {

// Element of the symmetric group on {1..d}. Points are stored 0-based.
// Product convention: (p * q) applies p first, then q, so that monodromy
// along a concatenated path a.b is h(a) * h(b).
class Permutation {
public:
  using point_type = std::uint32_t;

  Permutation() : Permutation(1) {}

  explicit Permutation(std::size_t d) : img_(d) {
    if (d == 0) fail(ErrorKind::Precondition, "permutation degree must be at least 1");
    std::iota(img_.begin(), img_.end(), point_type{0});
  }

  // images are 1-based
  static Permutation from_images(const std::vector<point_type>& images) {
    Permutation p(images.size());
    std::vector<bool> seen(images.size(), false);
    for (std::size_t i = 0; i < images.size(); ++i) {
      point_type v = images[i];
      if (v < 1 || v > images.size() || seen[v - 1])
        fail(ErrorKind::Parse, "image list is not a bijection of {1..d}");
      seen[v - 1] = true;
      p.img_[i] = v - 1;
    }
    return p;
  }

  static Permutation identity(std::size_t d) { return Permutation(d); }

  // Cycle notation, 1-based: "(1 2)(3 4)"; "()" is the identity.
  static Permutation parse(std::string_view text, std::size_t d) {
    Permutation p(d);
    std::vector<bool> used(d, false);
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
      if (text[i] != '(') fail(ErrorKind::Parse, "expected '(' in cycle notation: " + std::string(text));
      ++i;
      std::vector<point_type> cycle;
      for (;;) {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
        if (i >= text.size()) fail(ErrorKind::Parse, "unterminated cycle: " + std::string(text));
        if (text[i] == ')') {
          ++i;
          break;
        }
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
          fail(ErrorKind::Parse, "bad character in cycle notation: " + std::string(text));
        std::uint64_t v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
          if (v > d) fail(ErrorKind::Parse, "point out of range for degree " + std::to_string(d) + ": " + std::string(text));
          ++i;
        }
        if (v < 1) fail(ErrorKind::Parse, "points are 1-based: " + std::string(text));
        if (used[v - 1]) fail(ErrorKind::Parse, "point repeated in cycle notation: " + std::string(text));
        used[v - 1] = true;
        cycle.push_back(static_cast<point_type>(v - 1));
      }
      for (std::size_t j = 0; j < cycle.size(); ++j) p.img_[cycle[j]] = cycle[(j + 1) % cycle.size()];
      skip_ws();
    }
    return p;
  }

  std::size_t degree() const noexcept { return img_.size(); }

  // 1-based application
  point_type operator()(point_type x) const { return img_.at(x - 1) + 1; }
  point_type image0(point_type x) const { return img_[x]; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation r(degree());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<point_type>(i);
    return r;
  }

  friend Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
      fail(ErrorKind::DegreeMismatch, "cannot compose permutations of degree " + std::to_string(p.degree()) +
                                          " and " + std::to_string(q.degree()));
    Permutation r(p.degree());
    for (std::size_t i = 0; i < p.img_.size(); ++i) r.img_[i] = q.img_[p.img_[i]];
    return r;
  }

  Permutation& operator*=(const Permutation& q) { return *this = *this * q; }

  Permutation pow(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
    Permutation r(degree());
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  // sigma^{-1} * this * sigma
  Permutation conjugate_by(const Permutation& sigma) const { return sigma.inverse() * *this * sigma; }

  std::string to_string() const {
    std::string out;
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t s = 0; s < img_.size(); ++s) {
      if (seen[s] || img_[s] == s) continue;
      out += '(';
      std::size_t x = s;
      bool first = true;
      while (!seen[x]) {
        seen[x] = true;
        if (!first) out += ' ';
        out += std::to_string(x + 1);
        first = false;
        x = img_[x];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  const std::vector<point_type>& images0() const noexcept { return img_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    if (auto c = a.img_.size() <=> b.img_.size(); c != 0) return c;
    return a.img_ <=> b.img_;
  }

private:
  std::vector<point_type> img_;
};

inline void require_same_degree(const std::vector<Permutation>& ps, std::size_t d) {
  for (const auto& p : ps)
    if (p.degree() != d)
      fail(ErrorKind::DegreeMismatch,
           "permutation " + p.to_string() + " has degree " + std::to_string(p.degree()) + ", expected " + std::to_string(d));
}

}  // namespace coverflow
