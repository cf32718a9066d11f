#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coverflow/error.hpp"
#include "coverflow/group.hpp"
#include "coverflow/monodromy.hpp"

namespace coverflow {

// Eventually-zero point of the n-adic odometer. digits[0] is x_1.
struct OdometerPoint {
  unsigned base = 2;
  std::vector<unsigned> digits;

  OdometerPoint() = default;
  OdometerPoint(unsigned n, std::vector<unsigned> ds) : base(n), digits(std::move(ds)) {
    if (n < 2) fail(ErrorKind::Precondition, "odometer base must be at least 2");
    for (auto x : digits)
      if (x >= n) fail(ErrorKind::Precondition, "odometer digit out of range");
  }

  static OdometerPoint zero(unsigned n) { return OdometerPoint(n, {}); }

  // 1-based index of the first nonzero digit; empty for the zero point
  std::optional<std::size_t> first_nonzero() const {
    for (std::size_t i = 0; i < digits.size(); ++i)
      if (digits[i] != 0) return i + 1;
    return std::nullopt;
  }

  unsigned digit(std::size_t i) const { return i < digits.size() ? digits[i] : 0u; }

  void trim() {
    while (!digits.empty() && digits.back() == 0) digits.pop_back();
  }

  friend bool operator==(const OdometerPoint& a, const OdometerPoint& b) {
    if (a.base != b.base) return false;
    std::size_t n = std::max(a.digits.size(), b.digits.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a.digit(i) != b.digit(i)) return false;
    return true;
  }
};

inline void odometer_step_inplace(OdometerPoint& x) {
  for (auto& d : x.digits) {
    if (d + 1 < x.base) {
      ++d;
      return;
    }
    d = 0;
  }
  x.digits.push_back(1);
}

inline OdometerPoint odometer_step(OdometerPoint x) {
  odometer_step_inplace(x);
  return x;
}

struct SkewCocycle {
  unsigned base = 2;
  std::size_t d = 1;
  MonodromyRep psi{1};  // index k >= 1 stands for the generator l_k

  SkewCocycle() = default;
  SkewCocycle(unsigned n, MonodromyRep rep) : base(n), d(rep.degree()), psi(std::move(rep)) {
    if (n < 2) fail(ErrorKind::Precondition, "odometer base must be at least 2");
    for (const auto& [i, p] : psi.assignments())
      if (i < 1) fail(ErrorKind::Precondition, "skew cocycle indices must be positive, got " + std::to_string(i));
  }
};

struct SkewState {
  OdometerPoint point;
  std::uint32_t fiber = 1;  // 1-based
};

inline void skew_step_inplace(SkewState& s, const SkewCocycle& c) {
  if (s.point.base != c.base) fail(ErrorKind::Precondition, "odometer base does not match the cocycle");
  if (auto k = s.point.first_nonzero()) s.fiber = c.psi.at(static_cast<std::int64_t>(*k))(s.fiber);
  odometer_step_inplace(s.point);
}

inline SkewState skew_step(SkewState s, const SkewCocycle& c) {
  if (s.fiber < 1 || s.fiber > c.d) fail(ErrorKind::Precondition, "fiber out of range");
  skew_step_inplace(s, c);
  return s;
}

struct OrbitStatistics {
  unsigned base = 2;
  std::size_t d = 1;
  std::size_t depth = 1;
  std::uint64_t iterations = 0;
  // counts[cylinder * d + (fiber - 1)], cylinder = sum x_i n^{i-1} over the first depth digits
  std::vector<std::uint64_t> counts;
  double deviation = 0;        // max |count/N - 1/(n^depth d)| over all cells
  double fiber_deviation = 0;  // max |fiber count/N - 1/d|

  std::uint64_t count(std::uint64_t cylinder, std::uint32_t fiber) const { return counts[cylinder * d + fiber - 1]; }

  std::string cylinder_label(std::uint64_t cylinder) const {
    std::string s;
    for (std::size_t i = 0; i < depth; ++i) {
      s += std::to_string(cylinder % base);
      cylinder /= base;
    }
    return s;
  }
};

// Visits are counted at s0 and the N-1 states after it.
inline OrbitStatistics orbit_statistics(const SkewCocycle& c, SkewState s0, std::uint64_t N, std::size_t depth) {
  if (N < 1 || depth < 1) fail(ErrorKind::Precondition, "orbit_statistics needs N >= 1 and depth >= 1");
  double cells_d = std::pow(static_cast<double>(c.base), static_cast<double>(depth));
  if (cells_d * static_cast<double>(c.d) > 1e8) fail(ErrorKind::Precondition, "too many cylinder cells");
  std::uint64_t cells = static_cast<std::uint64_t>(cells_d);
  OrbitStatistics st;
  st.base = c.base;
  st.d = c.d;
  st.depth = depth;
  st.iterations = N;
  st.counts.assign(cells * c.d, 0);
  std::vector<std::uint64_t> fibers(c.d, 0);
  SkewState s = std::move(s0);
  if (s.fiber < 1 || s.fiber > c.d) fail(ErrorKind::Precondition, "fiber out of range");
  for (std::uint64_t t = 0; t < N; ++t) {
    std::uint64_t cyl = 0, w = 1;
    for (std::size_t i = 0; i < depth; ++i) {
      cyl += s.point.digit(i) * w;
      w *= c.base;
    }
    ++st.counts[cyl * c.d + s.fiber - 1];
    ++fibers[s.fiber - 1];
    if (t + 1 < N) skew_step_inplace(s, c);
  }
  const double expect_cell = 1.0 / (static_cast<double>(cells) * static_cast<double>(c.d));
  for (auto x : st.counts)
    st.deviation = std::max(st.deviation, std::abs(static_cast<double>(x) / static_cast<double>(N) - expect_cell));
  for (auto x : fibers)
    st.fiber_deviation =
        std::max(st.fiber_deviation, std::abs(static_cast<double>(x) / static_cast<double>(N) - 1.0 / static_cast<double>(c.d)));
  return st;
}

// Orbit partition of the fiber under <psi(l_k)>. More than one block is a
// certificate that E_psi is not ergodic.
inline Partition fiber_invariant_sets(const SkewCocycle& c) { return is_transitive(c.psi.images(), c.d).orbits; }

}  // namespace coverflow
