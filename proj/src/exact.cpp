#include "meromat/exact.hpp"
#include "meromat/error.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace meromat {

// ---- GaussRat -------------------------------------------------------------

GaussRat GaussRat::inverse() const {
  if (is_zero())
    throw InputError("division by zero");
  if (is_real())
    return GaussRat(mpq_class(1) / re_);
  mpq_class n = re_ * re_ + im_ * im_;
  return GaussRat(mpq_class(re_ / n), mpq_class(-im_ / n));
}

GaussRat &GaussRat::operator+=(const GaussRat &o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0)
    im_ += o.im_;
  return *this;
}

GaussRat &GaussRat::operator-=(const GaussRat &o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0)
    im_ -= o.im_;
  return *this;
}

GaussRat &GaussRat::operator*=(const GaussRat &o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussRat &GaussRat::operator/=(const GaussRat &o) {
  if (o.is_real()) {
    if (sgn(o.re_) == 0)
      throw InputError("division by zero");
    re_ /= o.re_;
    if (sgn(im_) != 0)
      im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussRat::str() const {
  if (is_real())
    return re_.get_str();
  std::string im;
  if (im_ == 1)
    im = "i";
  else if (im_ == -1)
    im = "-i";
  else
    im = im_.get_str() + "*i";
  if (sgn(re_) == 0)
    return im;
  std::string sep = sgn(im_) > 0 ? "+" : "";
  return "(" + re_.get_str() + sep + im + ")";
}

std::ostream &operator<<(std::ostream &os, const GaussRat &v) { return os << v.str(); }

mpq_class rationalize(double x, long max_den) {
  if (!std::isfinite(x))
    throw InputError("cannot rationalize a non-finite value");
  bool neg = x < 0;
  double a = std::fabs(x);
  // continued fraction convergents h/k
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = a;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(rem);
    mpz_class q(fl);
    mpz_class h2 = q * h1 + h0, k2 = q * k1 + k0;
    if (k2 > max_den)
      break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = rem - fl;
    if (frac < 1e-15 * std::max(1.0, a))
      break;
    rem = 1.0 / frac;
  }
  if (k1 == 0)
    return mpq_class(0);
  mpq_class r(h1, k1);
  r.canonicalize();
  return neg ? mpq_class(-r) : r;
}

// ---- Poly -----------------------------------------------------------------

namespace {
const GaussRat &zero_scalar() {
  static const GaussRat z;
  return z;
}
} // namespace

Poly::Poly(const GaussRat &c) {
  if (!c.is_zero())
    c_.push_back(c);
}

Poly::Poly(std::vector<GaussRat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const GaussRat &c, int k) {
  if (c.is_zero())
    return Poly();
  std::vector<GaussRat> v(static_cast<std::size_t>(k) + 1);
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero())
    c_.pop_back();
}

bool Poly::is_real() const {
  return std::all_of(c_.begin(), c_.end(), [](const GaussRat &c) { return c.is_real(); });
}

const GaussRat &Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size()))
    return zero_scalar();
  return c_[static_cast<std::size_t>(k)];
}

const GaussRat &Poly::lead() const {
  if (c_.empty())
    return zero_scalar();
  return c_.back();
}

Poly &Poly::operator+=(const Poly &o) {
  if (o.c_.size() > c_.size())
    c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k)
    c_[k] += o.c_[k];
  trim();
  return *this;
}

Poly &Poly::operator-=(const Poly &o) {
  if (o.c_.size() > c_.size())
    c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k)
    c_[k] -= o.c_[k];
  trim();
  return *this;
}

Poly operator*(const Poly &a, const Poly &b) {
  if (a.is_zero() || b.is_zero())
    return Poly();
  std::vector<GaussRat> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero())
      continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(out));
}

Poly &Poly::operator*=(const Poly &o) { return *this = *this * o; }

Poly &Poly::operator*=(const GaussRat &s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto &c : c_)
    c *= s;
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto &c : r.c_)
    c = -c;
  return r;
}

std::size_t Poly::height() const {
  auto bits = [](const mpq_class &q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
  };
  std::size_t h = 0;
  for (auto &c : c_)
    h += bits(c.re()) + (sgn(c.im()) ? bits(c.im()) : 0);
  return h;
}

Poly Poly::monic() const {
  if (is_zero() || lead().is_one())
    return *this;
  return *this * lead().inverse();
}

Poly Poly::derivative() const {
  if (c_.size() <= 1)
    return Poly();
  std::vector<GaussRat> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k)
    d[k - 1] = c_[k] * GaussRat(static_cast<long>(k));
  return Poly(std::move(d));
}

Poly Poly::pow(unsigned k) const {
  Poly result(1), base = *this;
  while (k) {
    if (k & 1u)
      result *= base;
    k >>= 1u;
    if (k)
      base *= base;
  }
  return result;
}

Poly Poly::reversed(int deg) const {
  if (deg < degree())
    throw InputError("reversal degree below polynomial degree");
  std::vector<GaussRat> v(static_cast<std::size_t>(deg) + 1);
  for (std::size_t k = 0; k < c_.size(); ++k)
    v[static_cast<std::size_t>(deg) - k] = c_[k];
  return Poly(std::move(v));
}

GaussRat Poly::eval(const GaussRat &x) const {
  GaussRat acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

std::vector<std::complex<double>> Poly::to_complex() const {
  std::vector<std::complex<double>> v;
  v.reserve(c_.size());
  for (auto &c : c_)
    v.push_back(c.to_complex());
  return v;
}

std::complex<double> Poly::eval(std::complex<double> x) const {
  std::complex<double> acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * x + it->to_complex();
  return acc;
}

std::string Poly::str() const {
  if (is_zero())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const GaussRat &c = c_[static_cast<std::size_t>(k)];
    if (c.is_zero())
      continue;
    std::string mono = k == 0 ? "" : (k == 1 ? "z" : "z^" + std::to_string(k));
    std::string coef;
    bool negative = false;
    if (c.is_real()) {
      mpq_class a = c.re();
      negative = sgn(a) < 0;
      if (negative)
        a = -a;
      coef = (a == 1 && k > 0) ? "" : a.get_str();
    } else {
      coef = c.str();
      if (coef.front() != '(')
        coef = "(" + coef + ")";
    }
    std::string term = coef.empty() ? mono : (mono.empty() ? coef : coef + "*" + mono);
    if (first)
      os << (negative ? "-" : "") << term;
    else
      os << (negative ? " - " : " + ") << term;
    first = false;
  }
  return os.str();
}

std::ostream &operator<<(std::ostream &os, const Poly &p) { return os << p.str(); }

std::pair<Poly, Poly> divmod(const Poly &p, const Poly &d) {
  if (d.is_zero())
    throw InputError("polynomial division by zero");
  if (p.degree() < d.degree())
    return {Poly(), p};
  std::vector<GaussRat> r = p.coeffs();
  const int dd = d.degree();
  std::vector<GaussRat> q(static_cast<std::size_t>(p.degree() - dd) + 1);
  GaussRat inv = d.lead().inverse();
  const auto &dc = d.coeffs();
  for (int k = p.degree(); k >= dd; --k) {
    GaussRat &top = r[static_cast<std::size_t>(k)];
    if (top.is_zero())
      continue;
    GaussRat f = top * inv;
    for (int j = 0; j <= dd; ++j)
      r[static_cast<std::size_t>(k - dd + j)] -= f * dc[static_cast<std::size_t>(j)];
    q[static_cast<std::size_t>(k - dd)] = std::move(f);
  }
  r.resize(static_cast<std::size_t>(dd));
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly exact_div(const Poly &p, const Poly &d) {
  auto [q, r] = divmod(p, d);
  if (!r.is_zero())
    throw InputError("inexact polynomial division");
  return q;
}

bool divides(const Poly &d, const Poly &p) {
  if (d.is_zero())
    return p.is_zero();
  return divmod(p, d).second.is_zero();
}

Poly gcd(const Poly &a, const Poly &b) {
  Poly x = a.monic(), y = b.monic();
  if (x.degree() < y.degree())
    std::swap(x, y);
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second.monic();
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

Xgcd xgcd(const Poly &a, const Poly &b) {
  if (a.is_zero() && b.is_zero())
    return {Poly(), Poly(), Poly()};
  // invariant: s0*a + t0*b = r0, s1*a + t1*b = r1
  Poly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  GaussRat c = r0.lead().inverse();
  return {r0 * Poly(c), s0 * Poly(c), t0 * Poly(c)};
}

Poly lcm(const Poly &a, const Poly &b) {
  if (a.is_zero() || b.is_zero())
    return Poly();
  return exact_div(a * b, gcd(a, b)).monic();
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly &p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() <= 0)
    return out;
  Poly f = p.monic();
  Poly df = f.derivative();
  Poly a = gcd(f, df);
  Poly b = exact_div(f, a);
  Poly c = exact_div(df, a);
  Poly d = c - b.derivative();
  for (int k = 1; b.degree() > 0; ++k) {
    Poly g = gcd(b, d);
    if (g.degree() > 0)
      out.emplace_back(g, k);
    b = exact_div(b, g);
    c = exact_div(d, g);
    d = c - b.derivative();
  }
  return out;
}

Poly squarefree_part(const Poly &p) {
  Poly s(1);
  for (auto &[f, k] : squarefree_decomposition(p))
    s *= f;
  return s;
}

int multiplicity(const Poly &p, const GaussRat &a) {
  if (p.is_zero())
    throw InputError("multiplicity in the zero polynomial");
  int k = 0;
  Poly q = p;
  while (q.degree() > 0 && q.eval(a).is_zero()) {
    q = exact_div(q, Poly::linear(a));
    ++k;
  }
  return k;
}

int multiplicity(const Poly &p, const Poly &f) {
  if (p.is_zero() || f.degree() <= 0)
    throw InputError("multiplicity needs nonzero p and nonconstant factor");
  int k = 0;
  Poly q = p;
  for (;;) {
    auto [quo, rem] = divmod(q, f);
    if (!rem.is_zero())
      return k;
    q = std::move(quo);
    ++k;
  }
}

namespace {

// Roots of a squarefree polynomial: companion eigenvalues, then Newton.
std::vector<std::complex<double>> squarefree_roots(const Poly &s) {
  const int n = s.degree();
  std::vector<std::complex<double>> roots;
  if (n <= 0)
    return roots;
  Poly m = s.monic();
  auto c = m.to_complex();
  if (n == 1) {
    roots.push_back(-c[0]);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i)
      comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
      comp(i, n - 1) = -c[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i)
      roots.push_back(es.eigenvalues()(i));
  }
  using lc = std::complex<long double>;
  std::vector<lc> cl(c.begin(), c.end());
  for (auto &r : roots) {
    lc x = r;
    for (int it = 0; it < 8; ++it) {
      lc f = 0, df = 0;
      for (auto k = cl.size(); k-- > 0;) {
        df = df * x + f;
        f = f * x + cl[k];
      }
      if (std::abs(df) == 0.0L)
        break;
      lc step = f / df;
      x -= step;
      if (std::abs(step) <= 1e-19L * (1.0L + std::abs(x)))
        break;
    }
    r = std::complex<double>(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  }
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return roots;
}

} // namespace

std::vector<std::complex<double>> numeric_roots(const Poly &p) {
  if (p.is_zero())
    throw InputError("roots of the zero polynomial");
  std::vector<std::complex<double>> out;
  for (auto &[s, k] : squarefree_decomposition(p))
    for (auto r : squarefree_roots(s))
      out.insert(out.end(), static_cast<std::size_t>(k), r);
  return out;
}

std::vector<GaussRat> exact_roots(const Poly &p) {
  if (p.is_zero())
    throw InputError("roots of the zero polynomial");
  std::vector<GaussRat> out;
  Poly s = squarefree_part(p);
  for (auto r : squarefree_roots(s)) {
    GaussRat cand(rationalize(r.real()), rationalize(r.imag()));
    if (std::abs(cand.to_complex() - r) > 1e-7 * (1.0 + std::abs(r)))
      continue;
    if (!s.eval(cand).is_zero())
      continue;
    if (std::find(out.begin(), out.end(), cand) == out.end())
      out.push_back(cand);
  }
  return out;
}

// ---- RatFn ----------------------------------------------------------------

RatFn::RatFn(const Poly &num, const Poly &den) {
  if (den.is_zero())
    throw InputError("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (den.is_constant()) {
    GaussRat inv = den.lead().inverse();
    num_ = num * inv;
    den_ = Poly(1);
    return;
  }
  Poly g = gcd(num, den);
  Poly n = g.is_one() ? num : exact_div(num, g);
  Poly d = g.is_one() ? den : exact_div(den, g);
  GaussRat inv = d.lead().inverse();
  num_ = n * inv;
  den_ = d * inv;
}

RatFn ratfn_reduce(const Poly &num, const Poly &den) { return RatFn(num, den); }

RatFn RatFn::inverse() const {
  if (is_zero())
    throw InputError("inverse of the zero rational function");
  return RatFn(den_, num_);
}

RatFn &RatFn::operator+=(const RatFn &o) {
  if (is_poly() && o.is_poly()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_)
    return *this = RatFn(num_ + o.num_, den_);
  return *this = RatFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFn &RatFn::operator-=(const RatFn &o) { return *this += -o; }

RatFn &RatFn::operator*=(const RatFn &o) {
  if (is_poly() && o.is_poly()) {
    num_ *= o.num_;
    return *this;
  }
  return *this = RatFn(num_ * o.num_, den_ * o.den_);
}

RatFn &RatFn::operator/=(const RatFn &o) { return *this *= o.inverse(); }

RatFn RatFn::operator-() const {
  RatFn r = *this;
  r.num_ = -r.num_;
  return r;
}

GaussRat RatFn::eval(const GaussRat &x) const {
  GaussRat d = den_.eval(x);
  if (d.is_zero())
    throw InputError("rational function evaluated at a pole");
  return num_.eval(x) / d;
}

std::complex<double> RatFn::eval(std::complex<double> x) const {
  return num_.eval(x) / den_.eval(x);
}

std::string RatFn::str() const {
  if (is_poly())
    return num_.str();
  std::string n = num_.str(), d = den_.str();
  bool n_atomic = num_.is_constant() || (num_.degree() == 1 && num_.coeffs()[0].is_zero());
  return (n_atomic ? n : "(" + n + ")") + "/(" + d + ")";
}

std::ostream &operator<<(std::ostream &os, const RatFn &f) { return os << f.str(); }

} // namespace meromat
