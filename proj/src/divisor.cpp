#include "meromat/divisor.hpp"
#include "meromat/error.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace meromat {

std::optional<Box> intersect(const std::optional<Box> &a, const std::optional<Box> &b) {
  if (!a)
    return b;
  if (!b)
    return a;
  return Box{std::max(a->x0, b->x0), std::min(a->x1, b->x1), std::max(a->y0, b->y0),
             std::min(a->y1, b->y1)};
}

namespace {

std::string format_complex(std::complex<double> z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

bool point_less(const Point &a, const Point &b) {
  if (a.approx.real() != b.approx.real())
    return a.approx.real() < b.approx.real();
  return a.approx.imag() < b.approx.imag();
}

std::vector<Point> roots_as_points(const Poly &f) {
  std::vector<Point> out;
  if (f.degree() <= 0)
    return out;
  if (f.degree() == 1) {
    GaussRat r = -(f.coeff(0) / f.lead());
    out.push_back({r, f.monic(), r.to_complex()});
    return out;
  }
  auto exact = exact_roots(f);
  Poly rest = f.monic();
  for (auto &r : exact) {
    out.push_back({r, Poly::linear(r), r.to_complex()});
    rest = exact_div(rest, Poly::linear(r));
  }
  if (rest.degree() > 0)
    for (auto z : numeric_roots(rest))
      out.push_back({std::nullopt, rest, z});
  std::sort(out.begin(), out.end(), point_less);
  return out;
}

// Pairwise coprime squarefree basis carrying one multiplicity per input slot.
struct BasisEntry {
  Poly f;
  long m[2];
};

void insert(std::vector<BasisEntry> &basis, Poly p, int slot, long k) {
  for (std::size_t i = 0, n = basis.size(); i < n && p.degree() > 0; ++i) {
    Poly g = gcd(basis[i].f, p);
    if (g.degree() <= 0)
      continue;
    if (g.degree() < basis[i].f.degree()) {
      BasisEntry rest{exact_div(basis[i].f, g), {basis[i].m[0], basis[i].m[1]}};
      basis[i].f = g;
      basis.push_back(std::move(rest));
    }
    basis[i].m[slot] += k;
    p = exact_div(p, g);
  }
  if (p.degree() > 0) {
    BasisEntry e{p.monic(), {0, 0}};
    e.m[slot] = k;
    basis.push_back(std::move(e));
  }
}

std::vector<BasisEntry> common_basis(const Divisor &a, const Divisor &b) {
  std::vector<BasisEntry> basis;
  for (auto &t : a.terms())
    insert(basis, t.factor, 0, t.mult);
  for (auto &t : b.terms())
    insert(basis, t.factor, 1, t.mult);
  return basis;
}

// Splits rational roots off as linear factors so they are reported exactly.
void push_split(std::vector<Divisor::Term> &terms, const Poly &f, long mult) {
  if (f.degree() <= 1) {
    terms.push_back({f.monic(), mult});
    return;
  }
  Poly rest = f.monic();
  for (auto &r : exact_roots(f)) {
    terms.push_back({Poly::linear(r), mult});
    rest = exact_div(rest, Poly::linear(r));
  }
  if (rest.degree() > 0)
    terms.push_back({rest, mult});
}

void sort_terms(std::vector<Divisor::Term> &terms) {
  std::vector<std::pair<std::complex<double>, std::size_t>> keys;
  for (std::size_t i = 0; i < terms.size(); ++i)
    keys.emplace_back(roots_as_points(terms[i].factor).front().approx, i);
  std::sort(keys.begin(), keys.end(), [&](const auto &a, const auto &b) {
    int da = terms[a.second].factor.degree(), db = terms[b.second].factor.degree();
    if (da != db)
      return da < db;
    if (a.first.real() != b.first.real())
      return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  std::vector<Divisor::Term> sorted;
  for (auto &k : keys)
    sorted.push_back(terms[k.second]);
  terms = std::move(sorted);
}

} // namespace

std::string Point::str() const {
  if (exact)
    return exact->str();
  return "root of (" + factor.str() + ") near " + format_complex(approx);
}

// ---- PointSet -------------------------------------------------------------

PointSet PointSet::roots_of(const Poly &p) {
  if (p.is_zero())
    throw InputError("point set of the zero polynomial");
  PointSet s;
  s.s_ = squarefree_part(p);
  return s;
}

PointSet PointSet::of_points(const std::vector<GaussRat> &pts) {
  Poly p(1);
  for (auto &x : pts)
    if (!p.eval(x).is_zero())
      p *= Poly::linear(x);
  PointSet s;
  s.s_ = p;
  return s;
}

PointSet PointSet::unite(const PointSet &o) const {
  PointSet s;
  s.s_ = lcm(s_, o.s_);
  return s;
}

PointSet PointSet::intersect(const PointSet &o) const {
  PointSet s;
  s.s_ = gcd(s_, o.s_);
  return s;
}

PointSet PointSet::minus(const PointSet &o) const {
  PointSet s;
  s.s_ = exact_div(s_, gcd(s_, o.s_)).monic();
  return s;
}

std::vector<Point> PointSet::points() const { return roots_as_points(s_); }

std::string PointSet::str() const {
  std::string out = "{";
  bool first = true;
  for (auto &p : points()) {
    out += (first ? "" : ", ") + p.str();
    first = false;
  }
  return out + "}";
}

// ---- Divisor --------------------------------------------------------------

Divisor Divisor::of_poly(const Poly &p) {
  if (p.is_zero())
    throw InputError("divisor of the zero polynomial");
  Divisor d;
  for (auto &[f, k] : squarefree_decomposition(p))
    push_split(d.terms_, f, k);
  sort_terms(d.terms_);
  return d;
}

Divisor Divisor::of_ratfn(const RatFn &f) {
  return of_poly(f.num()) - of_poly(f.den());
}

Divisor Divisor::restricted(const Box &region) const {
  Divisor d = *this;
  d.region_ = meromat::intersect(region_, region);
  std::vector<Term> kept;
  for (auto &t : d.terms_)
    if (d.roots_inside(t.factor) > 0)
      kept.push_back(t);
  d.terms_ = std::move(kept);
  return d;
}

std::size_t Divisor::roots_inside(const Poly &f) const {
  if (!region_)
    return static_cast<std::size_t>(f.degree());
  std::size_t n = 0;
  for (auto &p : roots_as_points(f))
    n += region_->contains(p.approx) ? 1 : 0;
  return n;
}

Divisor Divisor::combine(const Divisor &a, const Divisor &b, long sign) {
  Divisor d;
  d.region_ = meromat::intersect(a.region_, b.region_);
  for (auto &e : common_basis(a, b)) {
    long m = e.m[0] + sign * e.m[1];
    if (m != 0 && d.roots_inside(e.f) > 0)
      push_split(d.terms_, e.f, m);
  }
  sort_terms(d.terms_);
  return d;
}

Divisor operator+(const Divisor &a, const Divisor &b) { return Divisor::combine(a, b, 1); }
Divisor operator-(const Divisor &a, const Divisor &b) { return Divisor::combine(a, b, -1); }

Divisor Divisor::operator-() const {
  Divisor d = *this;
  for (auto &t : d.terms_)
    t.mult = -t.mult;
  return d;
}

bool operator==(const Divisor &a, const Divisor &b) { return (a - b).empty(); }

bool operator<=(const Divisor &a, const Divisor &b) {
  for (auto &t : (b - a).terms_)
    if (t.mult < 0)
      return false;
  return true;
}

bool Divisor::empty() const { return terms_.empty(); }

long Divisor::at(const GaussRat &x) const {
  for (auto &t : terms_)
    if (t.factor.eval(x).is_zero())
      return region_ && !region_->contains(x.to_complex()) ? 0 : t.mult;
  return 0;
}

long Divisor::total() const {
  long s = 0;
  for (auto &t : terms_)
    s += t.mult * static_cast<long>(roots_inside(t.factor));
  return s;
}

PointSet Divisor::support() const {
  Poly p(1);
  for (auto &t : terms_)
    p *= t.factor;
  return PointSet::roots_of(p);
}

std::vector<std::pair<Point, long>> Divisor::points() const {
  std::vector<std::pair<Point, long>> out;
  for (auto &t : terms_)
    for (auto &p : roots_as_points(t.factor))
      if (!region_ || region_->contains(p.approx))
        out.emplace_back(p, t.mult);
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return point_less(a.first, b.first); });
  return out;
}

std::string Divisor::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto &[p, m] : points()) {
    os << (first ? "" : ", ") << p.str() << ": " << m;
    first = false;
  }
  os << "}";
  return os.str();
}

} // namespace meromat
