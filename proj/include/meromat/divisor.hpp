#pragma once

#include "meromat/exact.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace meromat {

// Closed rectangle [x0, x1] x [y0, y1] of the complex plane.
struct Box {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool contains(std::complex<double> z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  bool operator==(const Box &) const = default;
};

std::optional<Box> intersect(const std::optional<Box> &a, const std::optional<Box> &b);

// A root of a squarefree factor. Exact when the root is a Gaussian rational;
// otherwise an opaque handle (factor, numeric approximation).
struct Point {
  std::optional<GaussRat> exact;
  Poly factor;
  std::complex<double> approx;
  std::string str() const;
};

// Finite point set represented by the monic squarefree polynomial vanishing on it.
class PointSet {
public:
  PointSet() : s_(1) {}
  static PointSet roots_of(const Poly &p);
  static PointSet of_points(const std::vector<GaussRat> &pts);

  const Poly &poly() const { return s_; }
  bool empty() const { return s_.degree() <= 0; }
  std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(s_.degree()); }
  bool contains(const GaussRat &x) const { return s_.eval(x).is_zero(); }

  PointSet unite(const PointSet &o) const;
  PointSet intersect(const PointSet &o) const;
  PointSet minus(const PointSet &o) const;
  bool subset_of(const PointSet &o) const { return minus(o).empty(); }
  std::vector<Point> points() const;
  std::string str() const;
  friend bool operator==(const PointSet &a, const PointSet &b) { return a.s_ == b.s_; }

private:
  Poly s_;
};

// Finitely supported integer-valued map on points. Stored over pairwise
// coprime monic squarefree factors: every root of `factor` carries `mult`.
// Comparisons are factor-wise and exact; the optional region only filters
// which factors take part (a factor counts when one of its roots lies inside).
class Divisor {
public:
  struct Term {
    Poly factor;
    long mult;
  };

  Divisor() = default;
  // Zeros of p with multiplicity (p nonzero).
  static Divisor of_poly(const Poly &p);
  // Zeros minus poles.
  static Divisor of_ratfn(const RatFn &f);

  Divisor restricted(const Box &region) const;
  const std::optional<Box> &region() const { return region_; }
  const std::vector<Term> &terms() const { return terms_; }

  friend Divisor operator+(const Divisor &a, const Divisor &b);
  friend Divisor operator-(const Divisor &a, const Divisor &b);
  Divisor operator-() const;
  friend bool operator==(const Divisor &a, const Divisor &b);
  friend bool operator!=(const Divisor &a, const Divisor &b) { return !(a == b); }
  // Pointwise a(x) <= b(x) everywhere in the common region.
  friend bool operator<=(const Divisor &a, const Divisor &b);

  bool empty() const;
  long at(const GaussRat &x) const;
  // Sum of values over the points inside the region.
  long total() const;
  PointSet support() const;
  std::vector<std::pair<Point, long>> points() const;
  std::string str() const;

private:
  static Divisor combine(const Divisor &a, const Divisor &b, long sign);
  std::size_t roots_inside(const Poly &f) const;
  std::vector<Term> terms_;
  std::optional<Box> region_;
};

} // namespace meromat
