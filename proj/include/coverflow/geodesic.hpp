#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coverflow/error.hpp"
#include "coverflow/golden.hpp"
#include "coverflow/interval.hpp"
#include "coverflow/ladder.hpp"

namespace coverflow::geodesic {

// n -> sign * n + shift
struct IsomZ {
  int sign = 1;
  std::int64_t shift = 0;

  std::int64_t operator()(std::int64_t n) const { return sign * n + shift; }
  // (f * g)(n) = f(g(n))
  friend IsomZ operator*(const IsomZ& f, const IsomZ& g) { return {f.sign * g.sign, f.sign * g.shift + f.shift}; }
  IsomZ inverse() const { return {sign, -sign * shift}; }
  friend bool operator==(const IsomZ&, const IsomZ&) = default;
};

enum class Gen { Psi, Rho };

inline IsomZ delta(Gen g) { return g == Gen::Psi ? IsomZ{-1, 0} : IsomZ{-1, 1}; }

// Word written left to right; the rightmost letter acts first.
inline IsomZ delta_image(const std::vector<Gen>& word) {
  IsomZ r;
  for (auto g : word) r = r * delta(g);
  return r;
}

// Accepts "ψ"/"ρ" or the ASCII letters p/r (also "psi"/"rho").
inline std::vector<Gen> parse_word(const std::string& s) {
  std::vector<Gen> w;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 3, "psi") == 0) { w.push_back(Gen::Psi); i += 3; }
    else if (s.compare(i, 3, "rho") == 0) { w.push_back(Gen::Rho); i += 3; }
    else if (s.compare(i, 2, "\xCF\x88") == 0) { w.push_back(Gen::Psi); i += 2; }
    else if (s.compare(i, 2, "\xCF\x81") == 0) { w.push_back(Gen::Rho); i += 2; }
    else if (s[i] == 'p') { w.push_back(Gen::Psi); ++i; }
    else if (s[i] == 'r') { w.push_back(Gen::Rho); ++i; }
    else if (s[i] == ' ' || s[i] == '*') ++i;
    else fail(ErrorKind::Parse, "bad letter in word: " + s);
  }
  return w;
}

enum class WalkExit { Horizon, Cusp, Funnel };

inline const char* to_string(WalkExit e) {
  switch (e) {
    case WalkExit::Horizon: return "horizon";
    case WalkExit::Cusp: return "cusp";
    case WalkExit::Funnel: return "funnel";
  }
  return "";
}

// Sequence of regions F_n met by a lifted geodesic ray.
class CodingWalk {
public:
  CodingWalk() : n_{0} {}
  CodingWalk(std::vector<std::int64_t> n, WalkExit exit) : n_(std::move(n)), exit_(exit) {
    if (n_.empty()) fail(ErrorKind::Precondition, "a coding walk has at least its starting region");
    for (std::size_t k = 1; k < n_.size(); ++k)
      if (n_[k] - n_[k - 1] != 1 && n_[k] - n_[k - 1] != -1)
        fail(ErrorKind::Precondition, "coding walk step " + std::to_string(k) + " is not +-1");
  }

  const std::vector<std::int64_t>& n() const noexcept { return n_; }
  WalkExit exit() const noexcept { return exit_; }
  bool divergent_into_cusp() const noexcept { return exit_ == WalkExit::Cusp; }
  std::size_t steps() const noexcept { return n_.size() - 1; }

  friend bool operator==(const CodingWalk&, const CodingWalk&) = default;

private:
  std::vector<std::int64_t> n_;
  WalkExit exit_ = WalkExit::Horizon;
};

namespace detail {

// Records region changes while the endpoint is pulled back into the domain.
struct Reducer {
  std::size_t max_steps;
  IsomZ acc;  // delta of the tile word accumulated so far
  std::vector<std::int64_t> n{0};

  bool done() const { return n.size() - 1 >= max_steps; }
  void translate(const mpz_class& m) {
    if (mpz_odd_p(m.get_mpz_t())) acc = acc * delta(Gen::Psi);
  }
  void invert() {
    acc = acc * delta(Gen::Rho);
    n.push_back(acc(0));
  }
};

inline mpz_class ceil_exact(const GoldenScalar& t) {
  mpfr_prec_t bits = 64;
  for (;; bits *= 2) {
    Interval iv = Interval::of(t, bits);
    mpz_class lo = iv.ceil_lo(), hi = iv.ceil_hi();
    if (lo == hi || bits > 4096) {
      mpz_class m = lo;
      while (GoldenScalar(mpq_class(m - 1), 0) >= t) --m;
      while (GoldenScalar(mpq_class(m), 0) < t) ++m;
      return m;
    }
  }
}

}  // namespace detail

// Exact walk for an endpoint in Q(phi); an empty endpoint means slope infinity.
inline CodingWalk coding_walk(std::optional<GoldenScalar> xi, std::size_t max_steps) {
  const GoldenScalar phi = GoldenScalar::phi(), two_phi(0, 2), one(1);
  detail::Reducer red{max_steps, {}, {0}};
  for (;;) {
    if (!xi) return {red.n, WalkExit::Cusp};
    if (red.done()) return {red.n, WalkExit::Horizon};
    GoldenScalar x = *xi;
    if (x > phi || x < -phi) {
      // pull by psi^{-m} so that x - 2 phi m lands in [-phi, phi]
      mpz_class m = detail::ceil_exact((x - phi) / two_phi);
      if (x < -phi) m = -detail::ceil_exact((-x - phi) / two_phi);
      red.translate(m);
      xi = x - two_phi * GoldenScalar(mpq_class(m), 0);
      continue;
    }
    GoldenScalar ax = x.abs();
    if (ax >= one) return {red.n, WalkExit::Funnel};
    red.invert();
    xi = x.is_zero() ? std::nullopt : std::optional<GoldenScalar>(x.reciprocal());
  }
}

// Certified enclosure of a real endpoint at a requested precision (bits).
using EndpointEnclosure = std::function<Interval(mpfr_prec_t)>;

namespace detail {

inline CodingWalk walk_at(const Interval& start, std::size_t max_steps) {
  const mpfr_prec_t bits = start.bits();
  const Interval phi = Interval::phi(bits), two_phi = mpq_class(2) * phi, one = Interval::of(mpq_class(1), bits);
  Reducer red{max_steps, {}, {0}};
  Interval x = start;
  for (;;) {
    if (red.done()) return {red.n, WalkExit::Horizon};
    if (x.certainly_greater(phi) || x.certainly_less(-phi)) {
      bool pos = x.certainly_greater(phi);
      Interval t = pos ? (x - phi) * two_phi.reciprocal() : (-x - phi) * two_phi.reciprocal();
      if (t.ceil_lo() != t.ceil_hi())
        fail(ErrorKind::Undecidable, "translation count undecided at step " + std::to_string(red.n.size() - 1));
      mpz_class m = pos ? t.ceil_lo() : mpz_class(-t.ceil_lo());
      red.translate(m);
      x = x - mpq_class(m) * two_phi;
      continue;
    }
    if (x.certainly_less(one) && x.certainly_greater(-one)) {
      red.invert();
      x = x.reciprocal();
      continue;
    }
    if (x.certainly_within(one, phi) || x.certainly_within(-phi, -one)) return {red.n, WalkExit::Funnel};
    fail(ErrorKind::Undecidable, "region undecided at step " + std::to_string(red.n.size() - 1) +
                                     ", endpoint enclosure " + x.to_string(12));
  }
}

}  // namespace detail

struct PrecisionPolicy {
  mpfr_prec_t start_bits = 128;
  mpfr_prec_t max_bits = 16384;
};

// Walk for a real endpoint given by certified enclosures; precision doubles
// until every comparison is decided or the policy is exhausted.
inline CodingWalk coding_walk(const EndpointEnclosure& xi, std::size_t max_steps, PrecisionPolicy policy = {}) {
  std::string last;
  for (mpfr_prec_t bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
    try {
      return detail::walk_at(xi(bits), max_steps);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Undecidable) throw;
      last = e.what();
    }
  }
  fail(ErrorKind::Undecidable, "precision exhausted at " + std::to_string(policy.max_bits) + " bits: " + last);
}

// Attracting fixed slope of a hyperbolic matrix, i.e. the forward endpoint
// of its axis: the root s of q s^2 + (p - t) s - r = 0 with |p + q s| > 1.
inline EndpointEnclosure attracting_fixed_slope(const Mat2& m) {
  return [m](mpfr_prec_t bits) {
    GoldenScalar A = m.q, B = m.p - m.t, C = -m.r;
    if (A.is_zero()) fail(ErrorKind::Precondition, "matrix fixes infinity");
    GoldenScalar disc = B * B - GoldenScalar(4) * A * C;
    if (disc.sign() <= 0) fail(ErrorKind::Precondition, "matrix is not hyperbolic");
    Interval root = Interval::of(disc, bits).sqrt();
    Interval den = Interval::of(GoldenScalar(2) * A, bits).reciprocal();
    Interval minusB = Interval::of(-B, bits);
    Interval s1 = (minusB + root) * den, s2 = (minusB - root) * den;
    Interval one = Interval::of(mpq_class(1), bits);
    auto expanding = [&](const Interval& s) {
      Interval v = Interval::of(m.p, bits) + Interval::of(m.q, bits) * s;
      return v.certainly_greater(one) || v.certainly_less(-one);
    };
    bool e1 = expanding(s1), e2 = expanding(s2);
    if (e1 == e2) fail(ErrorKind::Undecidable, "could not separate the fixed points");
    return e1 ? s1 : s2;
  };
}

inline Mat2 commutator_rho_psi() {
  // [rho, psi] = rho psi rho^-1 psi^-1
  return D_rho() * D_psi() * D_rho().inverse() * D_psi().inverse();
}

// Synthetic walks for the classifier and series probes.
inline CodingWalk linear_walk(std::size_t steps, int direction = 1) {
  std::vector<std::int64_t> n;
  for (std::size_t k = 0; k <= steps; ++k) n.push_back(direction * static_cast<std::int64_t>(k));
  return {n, WalkExit::Horizon};
}

inline CodingWalk oscillating_walk(std::size_t half_length) {
  std::vector<std::int64_t> n;
  for (std::size_t k = 0; k < 2 * half_length; ++k) n.push_back(static_cast<std::int64_t>(k % 2));
  return {n, WalkExit::Horizon};
}

// Walk from 0 with exactly c^N visits to each level 0 <= N <= levels, built
// from back-and-forth excursions, ending on level levels + 1.
inline CodingWalk power_walk(std::uint64_t c, std::size_t levels, int direction = 1) {
  if (c < 1) fail(ErrorKind::Precondition, "power walk base must be positive");
  std::vector<std::int64_t> n{0};
  mpz_class prev = 0, target = 1;  // u_{N-1}, c^N
  for (std::size_t N = 0; N <= levels; ++N) {
    // up-crossings of the edge (N, N+1): V_N = u_{N-1} + u_N - 1 (u_{-1} = 1 counts the start)
    mpz_class u = N == 0 ? target : target - prev + 1;
    if (u < 1 || u > 50'000'000) fail(ErrorKind::Precondition, "power walk too large");
    const std::int64_t lo = direction * static_cast<std::int64_t>(N), hi = direction * static_cast<std::int64_t>(N + 1);
    for (mpz_class i = 1; i < u; ++i) {
      n.push_back(hi);
      n.push_back(lo);
    }
    n.push_back(hi);
    prev = u;
    target *= c;
  }
  return {n, WalkExit::Horizon};
}

struct WalkSummary {
  std::map<std::int64_t, std::uint64_t> visits;  // V_N
  std::optional<std::int64_t> recurrent_level;
  std::uint64_t recurrence_threshold = 0;
  int sign = 1;                   // direction the walk heads in
  std::int64_t complete_levels = 0;  // levels s*1 .. s*J counted as complete
  bool monotone = false;          // every step in the same direction
  std::size_t length = 0;

  // growth exponent estimate over the trailing window [window_lo, window_hi] of |N|
  std::optional<double> v_estimate;
  std::int64_t window_lo = 0, window_hi = 0;
  std::vector<double> window_roots;      // V_N^{1/|N|} per level in the window
  std::optional<std::uint64_t> v_exact;  // all window counts are exact powers c^|N|

  std::uint64_t V(std::int64_t N) const {
    auto it = visits.find(N);
    return it == visits.end() ? 0 : it->second;
  }
};

inline WalkSummary walk_summary(const CodingWalk& w, std::uint64_t T, std::size_t window = 5) {
  WalkSummary ws;
  ws.recurrence_threshold = T;
  ws.length = w.n().size();
  for (auto x : w.n()) ++ws.visits[x];
  for (const auto& [N, c] : ws.visits)
    if (c >= T && (!ws.recurrent_level || std::llabs(N) < std::llabs(*ws.recurrent_level))) ws.recurrent_level = N;
  const auto last = w.n().back();
  ws.sign = last < 0 ? -1 : 1;
  ws.monotone = w.n().size() >= 2;
  for (std::size_t k = 1; k < w.n().size(); ++k)
    if (w.n()[k] - w.n()[k - 1] != w.n()[1] - w.n()[0]) ws.monotone = false;
  ws.complete_levels = std::llabs(last) - 1;
  if (ws.complete_levels >= 1) {
    ws.window_hi = ws.complete_levels;
    ws.window_lo = std::max<std::int64_t>(1, ws.window_hi - static_cast<std::int64_t>(window) + 1);
    double v = 0;
    for (auto j = ws.window_lo; j <= ws.window_hi; ++j) {
      double r = std::pow(static_cast<double>(ws.V(ws.sign * j)), 1.0 / static_cast<double>(j));
      ws.window_roots.push_back(r);
      v = std::max(v, r);
    }
    ws.v_estimate = v;
    // exact c with V_N = c^|N| across the window
    std::uint64_t c = static_cast<std::uint64_t>(std::llround(ws.window_roots.front()));
    bool exact = true;
    for (auto j = ws.window_lo; j <= ws.window_hi && exact; ++j) {
      mpz_class pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), c, static_cast<unsigned long>(j));
      exact = pw == mpz_class(std::to_string(ws.V(ws.sign * j)));
    }
    if (exact) ws.v_exact = c;
  }
  return ws;
}

enum class Branch { UniquelyErgodic_a, UniquelyErgodic_b, NonErgodic_c, Ergodic_c, Undetermined };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::UniquelyErgodic_a: return "UniquelyErgodic_a";
    case Branch::UniquelyErgodic_b: return "UniquelyErgodic_b";
    case Branch::NonErgodic_c: return "NonErgodic_c";
    case Branch::Ergodic_c: return "Ergodic_c";
    case Branch::Undetermined: return "Undetermined";
  }
  return "";
}

inline char branch_letter(Branch b) {
  switch (b) {
    case Branch::UniquelyErgodic_a: return 'a';
    case Branch::UniquelyErgodic_b: return 'b';
    case Branch::NonErgodic_c:
    case Branch::Ergodic_c: return 'c';
    case Branch::Undetermined: break;
  }
  return '?';
}

struct CoverVerdict {
  Branch branch = Branch::Undetermined;
  std::optional<ladder::LimitVerdict> tau_limit;
  ladder::Z2Hom tested;  // h, or psi_* h when the walk heads to -infinity
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

inline CoverVerdict classify_cover(const WalkSummary& ws, const ladder::Z2Hom& h, unsigned M, double tolerance = 1e-6) {
  if (!ladder::is_connected_double(h)) fail(ErrorKind::Precondition, "h = 0 is the disconnected double cover");
  CoverVerdict v;
  v.tested = h;
  if (ws.recurrent_level) {
    v.branch = Branch::UniquelyErgodic_a;
    v.flags.push_back("unique");
    return v;
  }
  if (!ws.v_estimate) {
    v.flags.push_back("walk_too_short");
    return v;
  }
  int side = 0;  // sign of v - phi^2
  if (ws.v_exact) {
    side = (GoldenScalar(static_cast<long>(*ws.v_exact)) - GoldenScalar(1, 1)).sign();
    v.flags.push_back("v_exact");
  } else {
    const double phi2 = 2.6180339887498948482;
    bool above = std::all_of(ws.window_roots.begin(), ws.window_roots.end(), [&](double r) { return r > phi2 + tolerance; });
    bool below = std::all_of(ws.window_roots.begin(), ws.window_roots.end(), [&](double r) { return r < phi2 - tolerance; });
    if (*ws.v_estimate > phi2 + tolerance && above) side = 1;
    else if (*ws.v_estimate < phi2 - tolerance && below) side = -1;
    else {
      v.flags.push_back("v_unresolved");
      return v;
    }
    v.flags.push_back("v_tolerance");
  }
  if (side > 0) {
    v.branch = Branch::UniquelyErgodic_b;
    v.flags.push_back("unique");
    return v;
  }
  if (ws.sign < 0) v.tested = ladder::psi_star(h);
  v.tau_limit = ladder::limits_to_zero(v.tested, M);
  v.flags.push_back("horizon_evidence");
  switch (v.tau_limit->kind) {
    case ladder::LimitVerdict::Kind::ConvergesCertified: v.branch = Branch::NonErgodic_c; break;
    case ladder::LimitVerdict::Kind::ProximityReturnedToOne:
      v.branch = Branch::Ergodic_c;
      v.flags.push_back(ws.monotone ? "boundary_caveat" : "unique");
      break;
    case ladder::LimitVerdict::Kind::Undetermined: v.branch = Branch::Undetermined; break;
  }
  return v;
}

enum class SeriesTrend { Convergent, Divergent, Inconclusive };

inline const char* to_string(SeriesTrend t) {
  switch (t) {
    case SeriesTrend::Convergent: return "CONVERGENT-TREND";
    case SeriesTrend::Divergent: return "DIVERGENT-TREND";
    case SeriesTrend::Inconclusive: return "INCONCLUSIVE";
  }
  return "";
}

struct SeriesReport {
  std::vector<GoldenScalar> partial_sums;  // S_0 .. S_Nmax
  std::vector<int> ratio_side;             // sign of V_{N+1} phi^-2 / V_N - 1 over the trailing window
  SeriesTrend trend = SeriesTrend::Inconclusive;
};

// S_N = sum_{N' <= N} V_{s N'} phi^{-2(N' + j)}, exact in Q(phi).
inline SeriesReport ms_series(const WalkSummary& ws, std::int64_t j, std::int64_t N_max, std::size_t window = 5) {
  if (N_max < 0) fail(ErrorKind::Precondition, "N_max must be nonnegative");
  if (N_max > std::max<std::int64_t>(ws.complete_levels, 0))
    fail(ErrorKind::Precondition, "N_max " + std::to_string(N_max) + " is past the walk's complete levels (" +
                                      std::to_string(ws.complete_levels) + ")");
  SeriesReport r;
  GoldenScalar sum;
  for (std::int64_t N = 0; N <= N_max; ++N) {
    sum += GoldenScalar(static_cast<long>(ws.V(ws.sign * N))) * GoldenScalar::phi_pow(-2 * (N + j));
    r.partial_sums.push_back(sum);
  }
  const GoldenScalar phi2(1, 1);
  bool all_zero = true, any_undefined = false;
  std::int64_t from = std::max<std::int64_t>(0, N_max - static_cast<std::int64_t>(window));
  for (std::int64_t N = from; N < N_max; ++N) {
    auto a = ws.V(ws.sign * N), b = ws.V(ws.sign * (N + 1));
    if (a == 0 && b == 0) continue;
    all_zero = false;
    if (a == 0) {
      any_undefined = true;
      continue;
    }
    // V_{N+1} / V_N vs phi^2
    r.ratio_side.push_back((GoldenScalar(static_cast<long>(b)) - GoldenScalar(static_cast<long>(a)) * phi2).sign());
  }
  if (all_zero && ws.V(ws.sign * N_max) == 0)
    r.trend = SeriesTrend::Convergent;
  else if (!any_undefined && !r.ratio_side.empty() &&
           std::all_of(r.ratio_side.begin(), r.ratio_side.end(), [](int s) { return s < 0; }))
    r.trend = SeriesTrend::Convergent;
  else if (!any_undefined && !r.ratio_side.empty() &&
           std::all_of(r.ratio_side.begin(), r.ratio_side.end(), [](int s) { return s > 0; }))
    r.trend = SeriesTrend::Divergent;
  return r;
}

struct MsTolerances {
  double zero = 1e-6;    // (i): last holonomy at most this
  double cauchy = 1e-3;  // (iii): sum over the trailing half at most this
};

struct MsConditions {
  bool holonomy_to_zero = false;  // (i)
  bool area_band = false;         // (ii)
  bool summable = false;          // (iii)
  std::string caveat = "finite-horizon trends only; the conditions are limits";
};

inline MsConditions ms_conditions_check(const std::vector<double>& holonomies, const std::vector<double>& areas,
                                        const std::vector<double>& symdiffs, double c, double c_prime,
                                        MsTolerances tol = {}) {
  if (!(0 < c && c < c_prime && c_prime < 1)) fail(ErrorKind::Precondition, "need 0 < c < c' < 1");
  if (holonomies.empty() || areas.empty() || symdiffs.empty())
    fail(ErrorKind::Precondition, "sequences must be nonempty");
  MsConditions r;
  {
    std::size_t half = holonomies.size() / 2;
    double head = 0, tail = 0;
    for (std::size_t i = 0; i < holonomies.size(); ++i) (i < half ? head : tail) = std::max(i < half ? head : tail, std::abs(holonomies[i]));
    r.holonomy_to_zero = std::abs(holonomies.back()) <= tol.zero && (half == 0 || tail <= head);
  }
  r.area_band = std::all_of(areas.begin(), areas.end(), [&](double a) { return c < a && a < c_prime; });
  {
    double tail = 0;
    for (std::size_t i = symdiffs.size() / 2; i < symdiffs.size(); ++i) tail += std::abs(symdiffs[i]);
    r.summable = tail <= tol.cauchy;
  }
  return r;
}

}  // namespace coverflow::geodesic
