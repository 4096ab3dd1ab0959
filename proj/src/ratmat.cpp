#include "meromat/ratmat.hpp"

#include <optional>

namespace meromat {

namespace {

// Row-reduces A in place (pivot = first nonzero, lowest degree sum) and
// applies the same operations to B. Returns the pivot columns.
std::vector<std::size_t> gauss_jordan(RatMat &A, RatMat *B, bool *negated = nullptr) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < A.cols() && row < A.rows(); ++col) {
    std::optional<std::size_t> p;
    for (std::size_t i = row; i < A.rows(); ++i) {
      const RatFn &x = A(i, col);
      if (x.is_zero())
        continue;
      auto cost = [](const RatFn &f) { return f.num().degree() + f.den().degree(); };
      if (!p || cost(x) < cost(A(*p, col)))
        p = i;
    }
    if (!p)
      continue;
    if (*p != row) {
      A.swap_rows(*p, row);
      if (B)
        B->swap_rows(*p, row);
      if (negated)
        *negated = !*negated;
    }
    RatFn inv = A(row, col).inverse();
    A.scale_row(row, inv);
    if (B)
      B->scale_row(row, inv);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == row || A(i, col).is_zero())
        continue;
      RatFn f = -A(i, col);
      A.add_row(i, row, f);
      if (B)
        B->add_row(i, row, f);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

long count_roots(const Poly &p, const GaussRat &at) {
  return p.is_zero() ? 0 : multiplicity(p, at);
}

} // namespace

RatFn det(const RatMat &A) {
  if (!A.square())
    throw DimensionError("determinant of a non-square matrix " + A.dims());
  RatMat M = A;
  const std::size_t n = M.rows();
  RatFn d(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::optional<std::size_t> p;
    for (std::size_t i = k; i < n && !p; ++i)
      if (!M(i, k).is_zero())
        p = i;
    if (!p)
      return RatFn();
    if (*p != k) {
      M.swap_rows(*p, k);
      d = -d;
    }
    d *= M(k, k);
    RatFn inv = M(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i)
      if (!M(i, k).is_zero())
        M.add_row(i, k, -(M(i, k) * inv));
  }
  return d;
}

std::size_t rank(const RatMat &A) {
  RatMat M = A;
  return gauss_jordan(M, nullptr).size();
}

RatMat solve(const RatMat &A, const RatMat &B) {
  if (!A.square() || A.rows() != B.rows())
    throw DimensionError("solve: incompatible dimensions " + A.dims() + ", " + B.dims());
  RatMat M = A, X = B;
  if (gauss_jordan(M, &X).size() != A.rows())
    throw InputError("solve: singular matrix");
  return X;
}

RatMat inverse(const RatMat &A) { return solve(A, RatMat::identity(A.rows())); }
RatMat inverse(const PolyMat &A) { return inverse(to_ratmat(A)); }

Poly SmithMcMillanDecomposition::zero_product() const {
  Poly p(1);
  for (auto &f : zero_factors)
    p *= f;
  return p;
}

Poly SmithMcMillanDecomposition::pole_product() const {
  Poly p(1);
  for (auto &f : pole_factors)
    p *= f;
  return p;
}

SmithMcMillanDecomposition smith_mcmillan(const RatMat &M) {
  Poly d(1);
  for (auto &x : M.data())
    d = lcm(d, x.den());
  PolyMat P = M.map([&](const RatFn &x) { return x.num() * exact_div(d, x.den()); });
  auto sm = smith_form(P);
  SmithMcMillanDecomposition out;
  out.E = std::move(sm.E);
  out.F = std::move(sm.F);
  out.E_inv = std::move(sm.E_inv);
  out.F_inv = std::move(sm.F_inv);
  out.nrank = sm.nrank;
  out.Sigma = RatMat(M.rows(), M.cols());
  for (std::size_t j = 0; j < sm.nrank; ++j) {
    RatFn q(sm.invariant_factors[j], d);
    out.zero_factors.push_back(q.num().monic());
    out.pole_factors.push_back(q.den());
    out.Sigma(j, j) = q;
  }
  // the leading constant lands in E so that phi_j stays monic
  for (std::size_t j = 0; j < sm.nrank; ++j) {
    GaussRat c = out.Sigma(j, j).num().lead();
    if (!c.is_one()) {
      out.E.scale_col(j, Poly(c));
      out.E_inv.scale_row(j, Poly(c.inverse()));
      out.Sigma(j, j) = RatFn(out.zero_factors[j], out.pole_factors[j]);
    }
  }
  return out;
}

PointClassification classify_points(const RatMat &M) {
  auto sm = smith_mcmillan(M);
  Poly phi = sm.zero_product(), psi = sm.pole_product();
  PointClassification out;
  PointSet zs = PointSet::roots_of(phi), ps = PointSet::roots_of(psi);
  out.eip = zs.intersect(ps);
  out.eig = zs.minus(ps);
  out.zeros = Divisor::of_poly(phi);
  out.poles = Divisor::of_poly(psi);
  return out;
}

IndexTuple pole_zero_index(const SmithMcMillanDecomposition &sm, const GaussRat &at) {
  IndexTuple t{at, {}};
  for (std::size_t j = 0; j < sm.nrank; ++j)
    t.values.push_back(count_roots(sm.zero_factors[j], at) - count_roots(sm.pole_factors[j], at));
  return t;
}

IndexTuple zero_index(const RatMat &M, const GaussRat &at) {
  auto sm = smith_mcmillan(M);
  IndexTuple t{at, {}};
  for (auto &f : sm.zero_factors)
    t.values.push_back(count_roots(f, at));
  return t;
}

IndexTuple pole_index(const RatMat &M, const GaussRat &at) {
  auto sm = smith_mcmillan(M);
  IndexTuple t{at, {}};
  for (auto &f : sm.pole_factors)
    t.values.push_back(count_roots(f, at));
  return t;
}

IndexTuple pole_zero_index(const RatMat &M, const GaussRat &at) {
  return pole_zero_index(smith_mcmillan(M), at);
}

RatMat Mfd::value() const {
  if (side == Side::Right)
    return to_ratmat(N) * inverse(D);
  return solve(to_ratmat(D), to_ratmat(N));
}

Mfd right_coprime_mfd(const RatMat &M) {
  auto sm = smith_mcmillan(M);
  const std::size_t m = M.rows(), n = M.cols(), r = sm.nrank;
  PolyMat Nphi(m, n), Dpsi = PolyMat::identity(n);
  for (std::size_t j = 0; j < r; ++j) {
    Nphi(j, j) = sm.zero_factors[j];
    Dpsi(j, j) = sm.pole_factors[j];
  }
  return {sm.E * Nphi, sm.F_inv * Dpsi, Side::Right, true};
}

Mfd left_coprime_mfd(const RatMat &M) {
  auto sm = smith_mcmillan(M);
  const std::size_t m = M.rows(), n = M.cols(), r = sm.nrank;
  PolyMat Nphi(m, n), Dpsi = PolyMat::identity(m);
  for (std::size_t j = 0; j < r; ++j) {
    Nphi(j, j) = sm.zero_factors[j];
    Dpsi(j, j) = sm.pole_factors[j];
  }
  return {Nphi * sm.F, Dpsi * sm.E_inv, Side::Left, true};
}

bool mfd_coprime(const Mfd &mfd) {
  if (mfd.side == Side::Right)
    return are_right_coprime(mfd.N, mfd.D).coprime;
  return are_left_coprime(mfd.D, mfd.N).coprime;
}

PolyMat mfd_unit_relator(const Mfd &m1, const Mfd &m2) {
  if (m1.side != m2.side)
    throw InputError("unit relator: MFDs on different sides");
  if (!mfd_coprime(m1) || !mfd_coprime(m2))
    throw NotCoprimeError("unit relator: MFD is not coprime");
  const bool right = m1.side == Side::Right;
  if (m1.D.rows() != m2.D.rows() || m1.N.rows() != m2.N.rows() || m1.N.cols() != m2.N.cols())
    throw InputError("unit relator: MFDs describe matrices of different shapes");
  RatMat U = right ? solve(to_ratmat(m2.D), to_ratmat(m1.D))
                   : to_ratmat(m1.D) * inverse(m2.D);
  PolyMat Up;
  try {
    Up = to_polymat(U);
  } catch (const InputError &) {
    throw InputError("unit relator: MFDs are not of the same matrix");
  }
  if (!is_unimodular(Up))
    throw InputError("unit relator: MFDs are not of the same matrix");
  if ((right ? m2.N * Up : Up * m2.N) != m1.N)
    throw InputError("unit relator: MFDs are not of the same matrix");
  return Up;
}

Divisor least_order(const RatMat &M) { return Divisor::of_poly(smith_mcmillan(M).pole_product()); }

long least_order_total(const RatMat &M) { return smith_mcmillan(M).pole_product().degree(); }

std::pair<PolyMat, RatMat> polynomial_split(const RatMat &M) {
  PolyMat P(M.rows(), M.cols());
  RatMat G(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      auto [q, r] = divmod(M(i, j).num(), M(i, j).den());
      P(i, j) = q;
      G(i, j) = RatFn(r, M(i, j).den());
    }
  return {P, G};
}

long mcmillan_degree(const RatMat &M) {
  auto [P, G] = polynomial_split(M);
  RatMat Pinv = P.map([](const Poly &p) {
    if (p.is_zero())
      return RatFn();
    int d = p.degree();
    return RatFn(p.reversed(d), Poly::monomial(1, d));
  });
  return least_order_total(G) + multiplicity(smith_mcmillan(Pinv).pole_product(), GaussRat(0));
}

} // namespace meromat
