#pragma once

// Exact scalars: rationals (GMP-backed) and Gaussian rationals.
// Every value is kept canonical: gcd(num, den) = 1, den > 0.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "weakfan/errors.hpp"

namespace weakfan {

class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design
  Rat(long num, long den) {
    if (den == 0) throw InputShapeError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& n) : v_(n) {}

  // Accepts "p", "-p", "p/q" with arbitrary-precision integers.
  static Rat parse(std::string_view s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string_view::npos) {
        return Rat(mpz_class(std::string(s)));
      }
      mpz_class num{std::string(s.substr(0, slash))};
      mpz_class den{std::string(s.substr(slash + 1))};
      if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
      mpq_class q(num, den);
      q.canonicalize();
      Rat r;
      r.v_ = q;
      return r;
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed rational '" + std::string(s) + "'");
    }
  }

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  Rat abs() const { return sign() < 0 ? -*this : *this; }

  // "p" when integral, otherwise "p/q"; canonical, parse round-trips.
  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

 private:
  mpq_class v_;
};

struct GaussRat {
  Rat re, im;

  GaussRat() = default;
  GaussRat(Rat r) : re(std::move(r)) {}  // NOLINT: implicit by design
  GaussRat(long n) : re(n) {}            // NOLINT
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat i() { return GaussRat(Rat(0), Rat(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_rational() const { return im.is_zero(); }
  GaussRat conj() const { return GaussRat(re, -im); }
  Rat norm() const { return re * re + im * im; }

  GaussRat operator-() const { return GaussRat(-re, -im); }
  GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
  GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
  GaussRat& operator*=(const GaussRat& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    Rat n = o.norm();
    if (n.is_zero()) throw DomainError("division by zero");
    GaussRat c = o.conj();
    *this *= c;
    re /= n;
    im /= n;
    return *this;
  }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  std::string str() const {
    if (im.is_zero()) return re.str();
    return re.str() + (im.sign() >= 0 ? "+" : "") + im.str() + "i";
  }
};

}  // namespace weakfan
