#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "coverflow/error.hpp"

namespace coverflow {

// a + b*phi in Q(phi), phi^2 = phi + 1.
class GoldenScalar {
public:
  GoldenScalar() : a_(0), b_(0) {}
  GoldenScalar(long a) : a_(a), b_(0) {}  // NOLINT(google-explicit-constructor)
  GoldenScalar(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static GoldenScalar phi() { return {0, 1}; }

  const mpq_class& a() const noexcept { return a_; }
  const mpq_class& b() const noexcept { return b_; }

  // exact sign of a + b*phi = ((2a+b) + b*sqrt5)/2
  int sign() const {
    mpq_class u = 2 * a_ + b_;
    int su = sgn(u), sw = sgn(b_);
    if (sw == 0) return su;
    if (su == 0 || su == sw) return sw;
    mpq_class lhs = u * u, rhs = 5 * b_ * b_;
    return cmp(lhs, rhs) > 0 ? su : sw;
  }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  GoldenScalar conjugate() const { return {a_ + b_, -b_}; }  // phi -> 1 - phi
  mpq_class norm() const { return a_ * a_ + a_ * b_ - b_ * b_; }

  GoldenScalar reciprocal() const {
    if (is_zero()) fail(ErrorKind::Precondition, "division by zero in Q(phi)");
    mpq_class n = norm();
    GoldenScalar c = conjugate();
    return {c.a_ / n, c.b_ / n};
  }

  friend GoldenScalar operator+(const GoldenScalar& x, const GoldenScalar& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend GoldenScalar operator-(const GoldenScalar& x, const GoldenScalar& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend GoldenScalar operator-(const GoldenScalar& x) { return {-x.a_, -x.b_}; }
  friend GoldenScalar operator*(const GoldenScalar& x, const GoldenScalar& y) {
    mpq_class bd = x.b_ * y.b_;
    return {x.a_ * y.a_ + bd, x.a_ * y.b_ + x.b_ * y.a_ + bd};
  }
  friend GoldenScalar operator/(const GoldenScalar& x, const GoldenScalar& y) { return x * y.reciprocal(); }
  GoldenScalar& operator+=(const GoldenScalar& y) { return *this = *this + y; }
  GoldenScalar& operator*=(const GoldenScalar& y) { return *this = *this * y; }

  friend bool operator==(const GoldenScalar& x, const GoldenScalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend int compare(const GoldenScalar& x, const GoldenScalar& y) { return (x - y).sign(); }
  friend bool operator<(const GoldenScalar& x, const GoldenScalar& y) { return compare(x, y) < 0; }
  friend bool operator>(const GoldenScalar& x, const GoldenScalar& y) { return compare(x, y) > 0; }
  friend bool operator<=(const GoldenScalar& x, const GoldenScalar& y) { return compare(x, y) <= 0; }
  friend bool operator>=(const GoldenScalar& x, const GoldenScalar& y) { return compare(x, y) >= 0; }

  GoldenScalar abs() const { return sign() < 0 ? -*this : *this; }

  // phi^e for any integer e; phi^-1 = phi - 1
  static GoldenScalar phi_pow(long e) {
    GoldenScalar base = e >= 0 ? phi() : GoldenScalar(-1, 1);
    unsigned long n = e >= 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
    GoldenScalar r(1);
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  double to_double() const { return a_.get_d() + b_.get_d() * 1.6180339887498948482; }

  std::string to_string() const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string s = sgn(a_) == 0 ? "" : a_.get_str();
    if (sgn(b_) > 0 && !s.empty()) s += "+";
    if (b_ == -1)
      s += "-";
    else if (b_ != 1)
      s += b_.get_str() + "*";
    return s + "phi";
  }

  // "a+b*phi" with rational a, b; terms may appear in either order and
  // "phi", "-phi", "3/2*phi" are accepted.
  static GoldenScalar parse(std::string_view text) {
    std::string t;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) fail(ErrorKind::Parse, "empty golden scalar");
    GoldenScalar out;
    std::size_t i = 0;
    while (i < t.size()) {
      std::size_t j = i + 1;
      while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
      std::string term = t.substr(i, j - i);
      i = j;
      bool neg = false;
      if (term[0] == '+' || term[0] == '-') {
        neg = term[0] == '-';
        term.erase(0, 1);
      }
      bool has_phi = false;
      if (term.size() >= 3 && term.compare(term.size() - 3, 3, "phi") == 0) {
        has_phi = true;
        term.erase(term.size() - 3);
        if (!term.empty() && term.back() == '*') term.pop_back();
        if (term.empty()) term = "1";
      }
      mpq_class q;
      if (term.empty() || q.set_str(term, 10) != 0) fail(ErrorKind::Parse, "bad golden scalar: " + std::string(text));
      if (q.get_den() == 0) fail(ErrorKind::Parse, "zero denominator: " + std::string(text));
      q.canonicalize();
      if (neg) q = -q;
      if (has_phi)
        out.b_ += q;
      else
        out.a_ += q;
    }
    return out;
  }

private:
  mpq_class a_, b_;
};

// 2x2 matrix over Q(phi) acting on column vectors (x, y); the slope of
// (x, y) is y / x.
struct Mat2 {
  GoldenScalar p, q, r, t;  // [[p, q], [r, t]]

  GoldenScalar det() const { return p * t - q * r; }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.p * n.p + m.q * n.r, m.p * n.q + m.q * n.t, m.r * n.p + m.t * n.r, m.r * n.q + m.t * n.t};
  }
  friend bool operator==(const Mat2& m, const Mat2& n) { return m.p == n.p && m.q == n.q && m.r == n.r && m.t == n.t; }

  Mat2 inverse() const {
    GoldenScalar dinv = det().reciprocal();
    return {t * dinv, -q * dinv, -r * dinv, p * dinv};
  }

  // slope s -> slope of M (1, s); empty optional stands for infinity
  std::optional<GoldenScalar> act_on_slope(const std::optional<GoldenScalar>& s) const {
    GoldenScalar x, y;
    if (s) {
      x = p + q * *s;
      y = r + t * *s;
    } else {
      x = q;
      y = t;
    }
    if (x.is_zero()) return std::nullopt;
    return y / x;
  }
};

inline Mat2 D_psi() { return {1, 0, GoldenScalar(0, 2), 1}; }
inline Mat2 D_rho() { return {0, 1, 1, 0}; }

}  // namespace coverflow
