#pragma once

// Random generators and independent oracles shared by unit and acceptance tests.

#include "meromat/polymat.hpp"
#include "meromat/ratmat.hpp"
#include "meromat/sysmat.hpp"

#include <algorithm>

#include <complex>
#include <random>
#include <vector>

namespace testsupport {

using namespace meromat;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  bool coin(double p = 0.5) { return real(0, 1) < p; }
  mpq_class rational(long num_range = 5, long max_den = 3) {
    mpq_class q(integer(-num_range, num_range), integer(1, max_den));
    q.canonicalize();
    return q;
  }
  std::mt19937_64 &engine() { return g_; }

private:
  std::mt19937_64 g_;
};

inline Poly random_poly(Rng &rng, int max_deg, long range = 3, bool rational = false) {
  int d = static_cast<int>(rng.integer(0, max_deg));
  std::vector<GaussRat> c;
  for (int k = 0; k <= d; ++k)
    c.emplace_back(rational ? rng.rational(range) : mpq_class(rng.integer(-range, range)));
  return Poly(std::move(c));
}

inline PolyMat random_polymat(Rng &rng, std::size_t r, std::size_t c, int max_deg,
                              double zero_prob = 0.15) {
  PolyMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = rng.coin(zero_prob) ? Poly() : random_poly(rng, max_deg);
  return m;
}

// Product of elementary operations with polynomial multipliers of degree <= 1.
inline PolyMat random_unimodular(Rng &rng, std::size_t n, int steps = 4) {
  PolyMat U = PolyMat::identity(n);
  if (n < 2)
    return n == 1 ? PolyMat{{Poly(rng.integer(1, 3))}} : U;
  for (int s = 0; s < steps; ++s) {
    std::size_t i = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 1));
    std::size_t k = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 2));
    if (k >= i)
      ++k;
    U.add_row(i, k, random_poly(rng, 1, 2));
  }
  if (rng.coin())
    U.swap_rows(0, n - 1);
  return U;
}

// Determinant by cofactor expansion along the first row; independent of the
// fraction-free elimination used by the library.
template <class T> T laplace_det(const Matrix<T> &A) {
  const std::size_t n = A.rows();
  if (n == 0)
    return T(1);
  if (n == 1)
    return A(0, 0);
  T acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (A(0, j).is_zero())
      continue;
    Matrix<T> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j)
          minor(i - 1, cc++) = A(i, c);
    T t = A(0, j) * laplace_det(minor);
    if (j % 2)
      acc -= t;
    else
      acc += t;
  }
  return acc;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>> &out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto &&self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

template <class T> std::vector<T> all_minors(const Matrix<T> &A, std::size_t k) {
  std::vector<std::vector<std::size_t>> rs, cs;
  subsets(A.rows(), k, rs);
  subsets(A.cols(), k, cs);
  std::vector<T> out;
  for (auto &r : rs)
    for (auto &c : cs) {
      Matrix<T> m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          m(i, j) = A(r[i], c[j]);
      out.push_back(laplace_det(m));
    }
  return out;
}

// Monic gcd of all k x k minors (the k-th determinantal divisor).
inline Poly determinantal_divisor(const PolyMat &A, std::size_t k) {
  Poly g;
  for (auto &m : all_minors(A, k))
    g = gcd(g, m);
  return g;
}

// Order of vanishing at a via repeated synthetic division; independent of
// meromat::multiplicity. Returns a large sentinel for the zero polynomial.
inline int valuation(const Poly &p, const GaussRat &a) {
  if (p.is_zero())
    return 1 << 20;
  int k = 0;
  std::vector<GaussRat> c = p.coeffs();
  for (;;) {
    // Horner: c(z) = (z - a) q(z) + c(a)
    std::vector<GaussRat> q(c.size() - 1);
    GaussRat acc;
    for (std::size_t i = c.size(); i-- > 0;) {
      acc = acc * a + c[i];
      if (i > 0)
        q[i - 1] = acc;
    }
    if (!acc.is_zero() || q.empty())
      return k;
    c = q;
    ++k;
  }
}

// Entries p/q with q a product of small linear factors and, now and then, an
// irreducible quadratic, so poles sit at rational and at non-rational points.
inline RatMat random_ratmat(Rng &rng, std::size_t r, std::size_t c, int max_deg = 2,
                            double zero_prob = 0.15) {
  RatMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if (rng.coin(zero_prob))
        continue;
      Poly num = random_poly(rng, max_deg);
      if (num.is_zero())
        num = Poly(1);
      Poly den(1);
      for (long k = rng.integer(0, 2); k > 0; --k)
        den *= Poly::linear(GaussRat(mpq_class(rng.integer(-2, 2))));
      if (rng.coin(0.1))
        den *= Poly::z() * Poly::z() + Poly(1);
      m(i, j) = RatFn(num, den);
    }
  return m;
}

inline int valuation(const RatFn &f, const GaussRat &a) {
  return valuation(f.num(), a) - valuation(f.den(), a);
}

// Pole-zero index at a from orders of minors: tau_1 + ... + tau_k is the least
// order at a among all k x k minors. Independent of the Smith-McMillan code.
inline std::vector<long> local_exponents(const RatMat &M, std::size_t r, const GaussRat &a) {
  std::vector<long> out;
  long prev = 0;
  for (std::size_t k = 1; k <= r; ++k) {
    long best = 1 << 20;
    for (auto &m : all_minors(M, k))
      if (!m.is_zero())
        best = std::min<long>(best, valuation(m, a));
    out.push_back(best - prev);
    prev = best;
  }
  return out;
}

inline ScalarMat random_scalar(Rng &rng, std::size_t r, std::size_t c, long range = 2) {
  ScalarMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = GaussRat(mpq_class(rng.integer(-range, range)));
  return m;
}

// State-space system [[zI - A0, B0], [-C0, D0]] with small integer data.
inline Amd random_state_space(Rng &rng, std::size_t r, std::size_t m, std::size_t n) {
  PolyMat A = to_polymat(random_scalar(rng, r, r)).map([](const Poly &p) { return -p; });
  for (std::size_t i = 0; i < r; ++i)
    A(i, i) += Poly::z();
  return Amd(A, to_polymat(random_scalar(rng, r, n)), to_polymat(random_scalar(rng, m, r)),
             to_polymat(random_scalar(rng, m, n)));
}

// Polynomial system matrix with regular state block of low degree.
inline Amd random_pmd(Rng &rng, std::size_t r, std::size_t m, std::size_t n, int max_deg = 1) {
  for (;;) {
    PolyMat A = random_polymat(rng, r, r, max_deg, 0.2);
    for (std::size_t i = 0; i < r; ++i)
      A(i, i) += Poly::z();
    if (det(A).is_zero())
      continue;
    return Amd(A, random_polymat(rng, r, n, max_deg, 0.3), random_polymat(rng, m, r, max_deg, 0.3),
               random_polymat(rng, m, n, max_deg, 0.3));
  }
}

template <class Gen> Amd irreducible(Rng &rng, Gen gen) {
  for (;;) {
    Amd H = gen(rng);
    if (is_irreducible(H))
      return H;
  }
}

} // namespace testsupport
