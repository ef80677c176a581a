#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "ctile/error.hpp"

namespace ctile {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_square_free(std::int64_t D) {
  if (D < 2) return false;
  for (std::int64_t p = 2; p * p <= D; ++p)
    if (D % (p * p) == 0) return false;
  return true;
}

// Throws unless D = 0 (rational mode) or D >= 2 square-free.
inline void validate_radicand(std::int64_t D) {
  if (D == 0) return;
  if (D == 1) throw InputError("radicand D = 1 is not allowed");
  if (!is_square_free(D))
    throw InputError("radicand D = " + std::to_string(D) + " is not square-free");
}

// a + b*sqrt(D). Values with b = 0 are compatible with every radicand.
class Quad {
 public:
  Quad() = default;
  Quad(int v) : a_(v) {}
  Quad(long v) : a_(v) {}
  Quad(const Integer& v) : a_(v) {}
  Quad(Rational a) : a_(std::move(a)) { a_.canonicalize(); }
  Quad(Rational a, Rational b, std::int64_t D) : a_(std::move(a)), b_(std::move(b)), D_(D) {
    a_.canonicalize();
    b_.canonicalize();
    if (b_ != 0 && D_ < 2) throw DomainError("irrational part requires a radicand D >= 2");
  }

  static Quad root(std::int64_t D) { return Quad(0, 1, D); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::int64_t radicand() const { return D_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  bool is_integer() const { return b_ == 0 && a_.get_den() == 1; }

  Integer to_integer() const {
    if (!is_integer()) throw DomainError("value is not an integer: " + str());
    return a_.get_num();
  }

  const Rational& to_rational() const {
    if (!is_rational()) throw DomainError("value is not rational: " + str());
    return a_;
  }

  Quad conjugate() const { return Quad(a_, -b_, D_); }

  // a^2 - D b^2
  Rational norm() const { return a_ * a_ - Rational(D_) * b_ * b_; }

  int sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    int c = cmp(a_ * a_, Rational(D_) * b_ * b_);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
  }

  Quad abs() const { return sign() < 0 ? -*this : *this; }

  Quad operator-() const {
    Quad r;
    r.a_ = -a_;
    r.b_ = -b_;
    r.D_ = D_;
    return r;
  }

  Quad& operator+=(const Quad& y) {
    D_ = join(*this, y);
    a_ += y.a_;
    b_ += y.b_;
    return *this;
  }
  Quad& operator-=(const Quad& y) {
    D_ = join(*this, y);
    a_ -= y.a_;
    b_ -= y.b_;
    return *this;
  }
  Quad& operator*=(const Quad& y) {
    std::int64_t D = join(*this, y);
    if (b_ == 0 && y.b_ == 0) {
      a_ *= y.a_;
    } else {
      Rational na = a_ * y.a_ + Rational(D) * b_ * y.b_;
      b_ = a_ * y.b_ + b_ * y.a_;
      a_ = std::move(na);
    }
    D_ = D;
    return *this;
  }
  Quad& operator/=(const Quad& y) {
    if (y.is_zero()) throw DomainError("division by zero");
    if (y.b_ == 0) {
      D_ = join(*this, y);
      a_ /= y.a_;
      b_ /= y.a_;
      return *this;
    }
    Rational n = y.norm();
    *this *= y.conjugate();
    a_ /= n;
    b_ /= n;
    return *this;
  }

  friend Quad operator+(Quad x, const Quad& y) { return x += y; }
  friend Quad operator-(Quad x, const Quad& y) { return x -= y; }
  friend Quad operator*(Quad x, const Quad& y) { return x *= y; }
  friend Quad operator/(Quad x, const Quad& y) { return x /= y; }

  friend bool operator==(const Quad& x, const Quad& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend std::strong_ordering operator<=>(const Quad& x, const Quad& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "p/q" when rational, else "a + b*sqrt(D)" for humans.
  std::string str() const {
    if (b_ == 0) return a_.get_str();
    std::string root = "sqrt(" + std::to_string(D_) + ")";
    std::string bs = b_ == 1 ? root : (b_ == -1 ? "-" + root : b_.get_str() + "*" + root);
    if (a_ == 0) return bs;
    return a_.get_str() + (b_ > 0 ? "+" : "") + bs;
  }
  friend std::ostream& operator<<(std::ostream& os, const Quad& x) { return os << x.str(); }

 private:
  static std::int64_t join(const Quad& x, const Quad& y) {
    if (x.D_ == y.D_) return x.D_;
    if (x.b_ == 0 && y.b_ == 0) return x.D_ ? x.D_ : y.D_;
    if (x.b_ == 0) return y.D_;
    if (y.b_ == 0) return x.D_;
    throw DomainError("mixed radicands " + std::to_string(x.D_) + " and " + std::to_string(y.D_));
  }

  Rational a_;
  Rational b_;
  std::int64_t D_ = 0;
};

inline Quad abs(const Quad& x) { return x.abs(); }
inline Quad min(const Quad& x, const Quad& y) { return y < x ? y : x; }
inline Quad max(const Quad& x, const Quad& y) { return x < y ? y : x; }

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Parses "p", "p/q" or a finite decimal "x.y".
inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw InputError("empty scalar literal");
  auto dot = s.find('.');
  Rational r;
  try {
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw InputError("bad scalar literal: " + text);
      std::string frac = s.substr(dot + 1);
      std::string whole = s.substr(0, dot);
      bool neg = !whole.empty() && whole[0] == '-';
      if (neg || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
      if (whole.empty()) whole = "0";
      Integer w(whole, 10), f(frac.empty() ? "0" : frac, 10);
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      r = Rational(w * den + f, den);
      if (neg) r = -r;
    } else {
      if (s[0] == '+') s = s.substr(1);
      if (r.set_str(s, 10) != 0) throw InputError("bad scalar literal: " + text);
      if (r.get_den() == 0) throw InputError("zero denominator: " + text);
    }
  } catch (const std::invalid_argument&) {
    throw InputError("bad scalar literal: " + text);
  }
  r.canonicalize();
  return r;
}

// RAII handle for an MPFR value.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend int compare(const BigFloat& x, const BigFloat& y) { return mpfr_cmp(x.v_, y.v_); }

 private:
  mpfr_t v_;
};

struct Approximation {
  BigFloat value;
  double error_bound;
};

// |value - x| <= error_bound <= 2^(-bits+2) (1 + |x|); working precision grows
// until cancellation between a and b*sqrt(D) is absorbed.
inline Approximation approximate(const Quad& x, mpfr_prec_t bits = 64) {
  if (bits < 53) throw DomainError("precision below 53 bits");
  BigFloat out(bits);
  if (x.is_rational()) {
    mpfr_set_q(out.get(), x.a().get_mpq_t(), MPFR_RNDN);
    double err = std::ldexp(std::abs(out.to_double()), -static_cast<int>(bits) + 1);
    return {out, err};
  }
  for (mpfr_prec_t wp = bits + 32;; wp *= 2) {
    BigFloat a(wp), b(wp), s(wp), mag(wp);
    mpfr_set_q(a.get(), x.a().get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(b.get(), x.b().get_mpq_t(), MPFR_RNDN);
    mpfr_set_si(s.get(), static_cast<long>(x.radicand()), MPFR_RNDN);
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDN);
    mpfr_mul(b.get(), b.get(), s.get(), MPFR_RNDN);
    mpfr_abs(mag.get(), a.get(), MPFR_RNDN);
    mpfr_abs(s.get(), b.get(), MPFR_RNDN);
    mpfr_add(mag.get(), mag.get(), s.get(), MPFR_RNDU);
    mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDN);
    // each rounded step contributes at most 2^-wp relative to |a| + |b sqrt D|
    double work_err = std::ldexp(mag.to_double(), -static_cast<int>(wp) + 3);
    mpfr_set(out.get(), a.get(), MPFR_RNDN);
    double absval = std::abs(out.to_double());
    double round_err = std::ldexp(absval, -static_cast<int>(bits) + 1);
    double target = std::ldexp(1.0 + absval, -static_cast<int>(bits) + 1);
    if (work_err <= target || wp > (1 << 16)) return {out, work_err + round_err};
  }
}

inline double to_double(const Quad& x) { return approximate(x, 64).value.to_double(); }

}  // namespace ctile
