#pragma once

#include <complex>
#include <gmpxx.h>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace meromat {

// a + b*i with a, b arbitrary-precision rationals.
class GaussRat {
public:
  GaussRat() = default;
  GaussRat(long v) : re_(v) {}
  GaussRat(const mpq_class &re) : re_(re) { re_.canonicalize(); }
  GaussRat(const mpq_class &re, const mpq_class &im) : re_(re), im_(im) {
    re_.canonicalize();
    im_.canonicalize();
  }
  static GaussRat i() { return GaussRat(mpq_class(0), mpq_class(1)); }

  const mpq_class &re() const { return re_; }
  const mpq_class &im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  GaussRat conj() const { return GaussRat(re_, -im_); }
  GaussRat inverse() const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussRat &operator+=(const GaussRat &o);
  GaussRat &operator-=(const GaussRat &o);
  GaussRat &operator*=(const GaussRat &o);
  GaussRat &operator/=(const GaussRat &o);
  friend GaussRat operator+(GaussRat a, const GaussRat &b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat &b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat &b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat &b) { return a /= b; }
  GaussRat operator-() const { return GaussRat(-re_, -im_); }
  friend bool operator==(const GaussRat &a, const GaussRat &b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat &a, const GaussRat &b) { return !(a == b); }

  // Text accepted by the entry parser: "3/2", "-i", "(1/2+3*i)".
  std::string str() const;

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream &operator<<(std::ostream &os, const GaussRat &v);

// Best rational approximation with bounded denominator, used to recognise
// exact roots from numeric ones.
mpq_class rationalize(double x, long max_den = 1000000);

// Univariate polynomial over Q(i). Coefficients lowest degree first, no
// trailing zeros; the zero polynomial has no coefficients.
class Poly {
public:
  Poly() = default;
  Poly(long c) : Poly(GaussRat(c)) {}
  Poly(const GaussRat &c);
  explicit Poly(std::vector<GaussRat> coeffs);

  static Poly z() { return Poly(std::vector<GaussRat>{0, 1}); }
  static Poly monomial(const GaussRat &c, int k);
  // z - a
  static Poly linear(const GaussRat &a) { return Poly(std::vector<GaussRat>{-a, 1}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // Total bit length of all numerators and denominators; a pivot tie-breaker.
  std::size_t height() const;
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
  bool is_real() const;
  const std::vector<GaussRat> &coeffs() const { return c_; }
  const GaussRat &coeff(int k) const;
  const GaussRat &lead() const;

  Poly &operator+=(const Poly &o);
  Poly &operator-=(const Poly &o);
  Poly &operator*=(const Poly &o);
  Poly &operator*=(const GaussRat &s);
  friend Poly operator+(Poly a, const Poly &b) { return a += b; }
  friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
  friend Poly operator*(const Poly &a, const Poly &b);
  friend Poly operator*(Poly a, const GaussRat &s) { return a *= s; }
  friend Poly operator*(const GaussRat &s, Poly a) { return a *= s; }
  Poly operator-() const;
  friend bool operator==(const Poly &a, const Poly &b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

  Poly monic() const;
  Poly derivative() const;
  Poly pow(unsigned k) const;
  // z^deg * p(1/z) for deg >= degree()
  Poly reversed(int deg) const;
  GaussRat eval(const GaussRat &x) const;
  std::complex<double> eval(std::complex<double> x) const;
  std::vector<std::complex<double>> to_complex() const;

  // Canonical text, highest degree first: "z^2 - 3*z + 1".
  std::string str() const;

private:
  void trim();
  std::vector<GaussRat> c_;
};

std::ostream &operator<<(std::ostream &os, const Poly &p);

// p = q*d + r, deg r < deg d. Throws InputError if d = 0.
std::pair<Poly, Poly> divmod(const Poly &p, const Poly &d);
// Quotient of an exact division; throws if the remainder is nonzero.
Poly exact_div(const Poly &p, const Poly &d);
bool divides(const Poly &d, const Poly &p);
Poly gcd(const Poly &a, const Poly &b);
// Monic g = gcd(a, b) with s*a + t*b = g, deg s < deg b, deg t < deg a.
struct Xgcd {
  Poly g, s, t;
};
Xgcd xgcd(const Poly &a, const Poly &b);
Poly lcm(const Poly &a, const Poly &b);

// Yun decomposition p = c * prod s_k^k, returned as (s_k, k) with deg s_k > 0.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly &p);
Poly squarefree_part(const Poly &p);
// Order of vanishing of p at a (p != 0).
int multiplicity(const Poly &p, const GaussRat &a);
// Largest k with f^k | p, for nonconstant f and p != 0.
int multiplicity(const Poly &p, const Poly &f);

// All complex roots with multiplicity, Newton-polished. p nonzero.
std::vector<std::complex<double>> numeric_roots(const Poly &p);
// Distinct roots of p that are Gaussian rationals with moderate denominators,
// each confirmed by exact evaluation.
std::vector<GaussRat> exact_roots(const Poly &p);

// Reduced rational function: den monic, gcd(num, den) = 1.
class RatFn {
public:
  RatFn() : den_(1) {}
  RatFn(long c) : num_(c), den_(1) {}
  RatFn(const GaussRat &c) : num_(c), den_(1) {}
  RatFn(const Poly &p) : num_(p), den_(1) {}
  RatFn(const Poly &num, const Poly &den);

  const Poly &num() const { return num_; }
  const Poly &den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_one(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }

  RatFn inverse() const;
  RatFn &operator+=(const RatFn &o);
  RatFn &operator-=(const RatFn &o);
  RatFn &operator*=(const RatFn &o);
  RatFn &operator/=(const RatFn &o);
  friend RatFn operator+(RatFn a, const RatFn &b) { return a += b; }
  friend RatFn operator-(RatFn a, const RatFn &b) { return a -= b; }
  friend RatFn operator*(RatFn a, const RatFn &b) { return a *= b; }
  friend RatFn operator/(RatFn a, const RatFn &b) { return a /= b; }
  RatFn operator-() const;
  friend bool operator==(const RatFn &a, const RatFn &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFn &a, const RatFn &b) { return !(a == b); }

  // Throws InputError at a pole.
  GaussRat eval(const GaussRat &x) const;
  std::complex<double> eval(std::complex<double> x) const;
  std::string str() const;

private:
  Poly num_, den_;
};

std::ostream &operator<<(std::ostream &os, const RatFn &f);

RatFn ratfn_reduce(const Poly &num, const Poly &den);

} // namespace meromat
