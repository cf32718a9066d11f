#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "coverflow/error.hpp"
#include "coverflow/golden.hpp"

namespace coverflow {

// Closed interval [lo, hi] with MPFR endpoints rounded outward, so that the
// true value is always enclosed.
class Interval {
public:
  explicit Interval(mpfr_prec_t bits) : bits_(bits) {
    mpfr_init2(lo_, bits);
    mpfr_init2(hi_, bits);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Interval(const Interval& o) : Interval(o.bits_) {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Interval& operator=(const Interval& o) {
    if (this != &o) {
      mpfr_set_prec(lo_, o.bits_);
      mpfr_set_prec(hi_, o.bits_);
      bits_ = o.bits_;
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval of(const mpq_class& q, mpfr_prec_t bits) {
    Interval r(bits);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static Interval sqrt_of(const mpq_class& q, mpfr_prec_t bits) {
    if (sgn(q) < 0) fail(ErrorKind::Precondition, "square root of a negative number");
    Interval r = of(q, bits);
    mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
    return r;
  }

  static Interval phi(mpfr_prec_t bits) {
    Interval r = sqrt_of(mpq_class(5), bits);
    Interval one = of(mpq_class(1), bits);
    r = r + one;
    mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDD);
    mpfr_div_2ui(r.hi_, r.hi_, 1, MPFR_RNDU);
    return r;
  }

  static Interval of(const GoldenScalar& x, mpfr_prec_t bits) {
    return of(x.a(), bits) + of(x.b(), bits) * phi(bits);
  }

  mpfr_prec_t bits() const noexcept { return bits_; }

  friend Interval operator+(const Interval& x, const Interval& y) {
    Interval r(x.bits_);
    mpfr_add(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& x) {
    Interval r(x.bits_);
    mpfr_neg(r.lo_, x.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& x, const Interval& y) { return x + (-y); }

  friend Interval operator*(const Interval& x, const Interval& y) {
    Interval r(x.bits_);
    mpfr_t c;
    mpfr_init2(c, x.bits_);
    bool first = true;
    for (auto a : {x.lo_, x.hi_})
      for (auto b : {y.lo_, y.hi_}) {
        mpfr_mul(c, a, b, MPFR_RNDD);
        if (first || mpfr_less_p(c, r.lo_)) mpfr_set(r.lo_, c, MPFR_RNDD);
        mpfr_mul(c, a, b, MPFR_RNDU);
        if (first || mpfr_greater_p(c, r.hi_)) mpfr_set(r.hi_, c, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(c);
    return r;
  }

  Interval sqrt() const {
    if (mpfr_sgn(lo_) < 0) fail(ErrorKind::Undecidable, "square root of an interval reaching below zero");
    Interval r(bits_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  // exact product with a rational
  friend Interval operator*(const mpq_class& q, const Interval& x) { return of(q, x.bits_) * x; }

  // ceil of the lower endpoint
  mpz_class ceil_lo() const {
    mpz_class z;
    mpfr_t c;
    mpfr_init2(c, bits_);
    mpfr_ceil(c, lo_);
    mpfr_get_z(z.get_mpz_t(), c, MPFR_RNDN);
    mpfr_clear(c);
    return z;
  }

  mpz_class ceil_hi() const {
    mpz_class z;
    mpfr_t c;
    mpfr_init2(c, bits_);
    mpfr_ceil(c, hi_);
    mpfr_get_z(z.get_mpz_t(), c, MPFR_RNDN);
    mpfr_clear(c);
    return z;
  }

  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

  Interval reciprocal() const {
    if (contains_zero()) fail(ErrorKind::Undecidable, "interval reciprocal straddles zero");
    Interval r(bits_);
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
  }

  // certified comparisons; both false means undecided at this precision
  bool certainly_less(const Interval& y) const { return mpfr_less_p(hi_, y.lo_); }
  bool certainly_greater(const Interval& y) const { return mpfr_greater_p(lo_, y.hi_); }
  // whole enclosure inside the closed interval [a, b]
  bool certainly_within(const Interval& a, const Interval& b) const {
    return mpfr_greaterequal_p(lo_, a.hi_) && mpfr_lessequal_p(hi_, b.lo_);
  }

  double mid() const {
    return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
  }

  // log2 of the width, for diagnostics
  double width() const {
    mpfr_t w;
    mpfr_init2(w, bits_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  std::string to_string(int digits = 30) const {
    auto one = [&](const mpfr_t v) {
      char* buf = nullptr;
      mpfr_asprintf(&buf, "%.*Rg", digits, v);
      std::string s(buf);
      mpfr_free_str(buf);
      return s;
    };
    return "[" + one(lo_) + ", " + one(hi_) + "]";
  }

private:
  mpfr_prec_t bits_;
  mpfr_t lo_, hi_;
};

}  // namespace coverflow
