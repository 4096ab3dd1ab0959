#include "meromat/polymat.hpp"

#include <optional>

namespace meromat {

namespace {

// Row operations on S mirrored into the accumulated left transform U and its
// inverse; column operations into V and its inverse. U * S0 * V = S always.
struct Reducer {
  PolyMat S, U, U_inv, V, V_inv;
  bool track_cols = true;

  explicit Reducer(const PolyMat &A, bool cols = true)
      : S(A), U(PolyMat::identity(A.rows())), U_inv(PolyMat::identity(A.rows())),
        track_cols(cols) {
    if (cols) {
      V = PolyMat::identity(A.cols());
      V_inv = PolyMat::identity(A.cols());
    }
  }

  // row i += q * row k
  void row_add(std::size_t i, std::size_t k, const Poly &q) {
    if (q.is_zero())
      return;
    S.add_row(i, k, q);
    U.add_row(i, k, q);
    U_inv.add_col(k, i, -q);
  }
  void row_swap(std::size_t i, std::size_t k) {
    S.swap_rows(i, k);
    U.swap_rows(i, k);
    U_inv.swap_cols(i, k);
  }
  void row_scale(std::size_t i, const GaussRat &c) {
    if (c.is_one())
      return;
    Poly pc(c), pinv(c.inverse());
    S.scale_row(i, pc);
    U.scale_row(i, pc);
    U_inv.scale_col(i, pinv);
  }
  // col j += q * col k
  void col_add(std::size_t j, std::size_t k, const Poly &q) {
    if (q.is_zero())
      return;
    S.add_col(j, k, q);
    V.add_col(j, k, q);
    V_inv.add_row(k, j, -q);
  }
  // rows (k, i) <- [[s, t], [u, v]] (rows k, i) with s*v - t*u = 1
  void row_mix(std::size_t k, std::size_t i, const Poly &s, const Poly &t, const Poly &u,
               const Poly &v) {
    mix_rows(S, k, i, s, t, u, v);
    mix_rows(U, k, i, s, t, u, v);
    mix_cols(U_inv, k, i, v, -u, -t, s);
  }
  // cols (k, j) <- (cols k, j) * [[s, u], [t, v]] with s*v - t*u = 1
  void col_mix(std::size_t k, std::size_t j, const Poly &s, const Poly &t, const Poly &u,
               const Poly &v) {
    mix_cols(S, k, j, s, t, u, v);
    mix_cols(V, k, j, s, t, u, v);
    mix_rows(V_inv, k, j, v, -u, -t, s);
  }
  // Clears S(i, k) against the pivot S(k, k), leaving their gcd at the pivot.
  void row_gcd(std::size_t k, std::size_t i) {
    const Poly a = S(k, k), b = S(i, k);
    auto [q, r] = divmod(b, a);
    if (r.is_zero()) {
      row_add(i, k, -q);
      return;
    }
    auto x = xgcd(a, b);
    row_mix(k, i, x.s, x.t, -exact_div(b, x.g), exact_div(a, x.g));
  }
  void col_gcd(std::size_t k, std::size_t j) {
    const Poly a = S(k, k), b = S(k, j);
    auto [q, r] = divmod(b, a);
    if (r.is_zero()) {
      col_add(j, k, -q);
      return;
    }
    auto x = xgcd(a, b);
    col_mix(k, j, x.s, x.t, -exact_div(b, x.g), exact_div(a, x.g));
  }

  static void mix_rows(PolyMat &M, std::size_t k, std::size_t i, const Poly &s, const Poly &t,
                       const Poly &u, const Poly &v) {
    for (std::size_t c = 0; c < M.cols(); ++c) {
      Poly a = M(k, c), b = M(i, c);
      M(k, c) = s * a + t * b;
      M(i, c) = u * a + v * b;
    }
  }
  static void mix_cols(PolyMat &M, std::size_t k, std::size_t j, const Poly &s, const Poly &t,
                       const Poly &u, const Poly &v) {
    for (std::size_t r = 0; r < M.rows(); ++r) {
      Poly a = M(r, k), b = M(r, j);
      M(r, k) = s * a + t * b;
      M(r, j) = u * a + v * b;
    }
  }

  void col_swap(std::size_t j, std::size_t k) {
    S.swap_cols(j, k);
    V.swap_cols(j, k);
    V_inv.swap_rows(j, k);
  }
};

// Nonzero entry of minimal degree in S[k.., k..], ties to the smaller height and
// then to the lowest (row, col).
std::optional<std::pair<std::size_t, std::size_t>> min_degree_entry(const PolyMat &S,
                                                                    std::size_t k) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  int best_deg = 0;
  std::size_t best_h = 0;
  for (std::size_t i = k; i < S.rows(); ++i)
    for (std::size_t j = k; j < S.cols(); ++j) {
      const Poly &x = S(i, j);
      if (x.is_zero())
        continue;
      std::size_t h = x.height();
      if (!best || x.degree() < best_deg || (x.degree() == best_deg && h < best_h)) {
        best = {i, j};
        best_deg = x.degree();
        best_h = h;
      }
    }
  return best;
}

PolyMat scaled_rows(const PolyMat &F, const std::vector<Poly> &phi) {
  PolyMat out(phi.size(), F.cols());
  for (std::size_t j = 0; j < phi.size(); ++j)
    for (std::size_t c = 0; c < F.cols(); ++c)
      out(j, c) = phi[j] * F(j, c);
  return out;
}

} // namespace

SmithDecomposition smith_form(const PolyMat &A) {
  Reducer red(A);
  PolyMat &S = red.S;
  const std::size_t lim = std::min(A.rows(), A.cols());
  std::size_t k = 0;
  while (k < lim) {
    auto piv = min_degree_entry(S, k);
    if (!piv)
      break;
    red.row_swap(k, piv->first);
    red.col_swap(k, piv->second);
    for (;;) {
      // alternate column and row sweeps until the pivot cross is clear
      for (;;) {
        for (std::size_t i = k + 1; i < S.rows(); ++i)
          if (!S(i, k).is_zero())
            red.row_gcd(k, i);
        bool row_clean = true;
        for (std::size_t j = k + 1; j < S.cols(); ++j)
          if (!S(k, j).is_zero()) {
            row_clean = row_clean && divides(S(k, k), S(k, j));
            red.col_gcd(k, j);
          }
        if (row_clean)
          break;
      }
      red.row_scale(k, S(k, k).lead().inverse());
      // the pivot must divide the whole trailing block
      std::optional<std::size_t> bad;
      for (std::size_t i = k + 1; i < S.rows() && !bad; ++i)
        for (std::size_t j = k + 1; j < S.cols(); ++j)
          if (!S(i, j).is_zero() && !divides(S(k, k), S(i, j))) {
            bad = i;
            break;
          }
      if (!bad)
        break;
      red.row_add(k, *bad, Poly(1));
    }
    ++k;
  }

  SmithDecomposition out;
  out.nrank = k;
  for (std::size_t j = 0; j < k; ++j)
    out.invariant_factors.push_back(S(j, j));
  out.S = std::move(red.S);
  out.E = std::move(red.U_inv);
  out.E_inv = std::move(red.U);
  out.F = std::move(red.V_inv);
  out.F_inv = std::move(red.V);
  return out;
}

Poly det(const PolyMat &A) {
  if (!A.square())
    throw DimensionError("determinant of a non-square matrix " + A.dims());
  const std::size_t n = A.rows();
  if (n == 0)
    return Poly(1);
  PolyMat M = A;
  Poly prev(1);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::optional<std::size_t> p;
    for (std::size_t i = k; i < n; ++i)
      if (!M(i, k).is_zero() && (!p || M(i, k).degree() < M(*p, k).degree()))
        p = i;
    if (!p)
      return Poly();
    if (*p != k) {
      M.swap_rows(*p, k);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        M(i, j) = exact_div(M(k, k) * M(i, j) - M(i, k) * M(k, j), prev);
      M(i, k) = Poly();
    }
    prev = M(k, k);
  }
  return negate ? -M(n - 1, n - 1) : M(n - 1, n - 1);
}

std::size_t nrank(const PolyMat &A) {
  PolyMat M = A;
  Poly prev(1);
  std::size_t k = 0;
  for (; k < std::min(M.rows(), M.cols()); ++k) {
    auto piv = min_degree_entry(M, k);
    if (!piv)
      break;
    M.swap_rows(k, piv->first);
    M.swap_cols(k, piv->second);
    for (std::size_t i = k + 1; i < M.rows(); ++i) {
      for (std::size_t j = k + 1; j < M.cols(); ++j)
        M(i, j) = exact_div(M(k, k) * M(i, j) - M(i, k) * M(k, j), prev);
      M(i, k) = Poly();
    }
    prev = M(k, k);
  }
  return k;
}

bool is_unimodular(const PolyMat &A) {
  if (!A.square())
    throw DimensionError("unimodularity of a non-square matrix " + A.dims());
  Poly d = det(A);
  return !d.is_zero() && d.degree() == 0;
}

PolyMat unimodular_inverse(const PolyMat &U) {
  if (!is_unimodular(U))
    throw InputError("matrix is not unimodular");
  auto sm = smith_form(U);
  return sm.F_inv * sm.E_inv;
}

HermiteForm hermite_form(const PolyMat &A) {
  if (!A.square())
    throw DimensionError("hermite form of a non-square matrix " + A.dims());
  const std::size_t n = A.rows();
  Reducer red(A, false);
  PolyMat &H = red.S;
  for (std::size_t k = 0; k < n; ++k) {
    for (;;) {
      std::optional<std::size_t> p;
      for (std::size_t i = k; i < n; ++i)
        if (!H(i, k).is_zero() && (!p || H(i, k).degree() < H(*p, k).degree()))
          p = i;
      if (!p)
        throw RankDeficientError("hermite form of a singular matrix");
      red.row_swap(k, *p);
      bool done = true;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (H(i, k).is_zero())
          continue;
        auto [q, r] = divmod(H(i, k), H(k, k));
        red.row_add(i, k, -q);
        done = done && r.is_zero();
      }
      if (done)
        break;
    }
    red.row_scale(k, H(k, k).lead().inverse());
    for (std::size_t i = 0; i < k; ++i)
      if (!H(i, k).is_zero())
        red.row_add(i, k, -divmod(H(i, k), H(k, k)).first);
  }
  return {std::move(red.S), std::move(red.U), std::move(red.U_inv)};
}

RightStructure right_structure(const PolyMat &A) {
  auto sm = smith_form(A);
  const std::size_t r = sm.nrank;
  RightStructure out;
  out.E1 = sm.E.block(0, 0, A.rows(), r);
  out.DR = scaled_rows(sm.F, sm.invariant_factors);
  out.left_inverse = sm.E_inv.block(0, 0, r, A.rows());
  return out;
}

CommonDivisor gcrd(const PolyMat &A, const PolyMat &B) {
  if (A.cols() != B.cols())
    throw DimensionError("gcrd needs equal column counts: " + A.dims() + ", " + B.dims());
  const std::size_t n = A.cols(), m = A.rows();
  PolyMat W = vstack(A, B);
  auto sm = smith_form(W);
  if (sm.nrank < n)
    throw RankDeficientError("gcrd: stacked matrix has normal rank " + std::to_string(sm.nrank) +
                             " < " + std::to_string(n));
  PolyMat DR = scaled_rows(sm.F, sm.invariant_factors);
  PolyMat Q = sm.E.block(0, 0, W.rows(), n);
  PolyMat X = sm.E_inv.block(0, 0, n, W.rows());
  auto hf = hermite_form(DR);
  Q = Q * hf.U_inv;
  X = hf.U * X;
  CommonDivisor out;
  out.D = std::move(hf.H);
  out.Q1 = Q.block(0, 0, m, n);
  out.Q2 = Q.block(m, 0, B.rows(), n);
  out.X1 = X.block(0, 0, n, m);
  out.X2 = X.block(0, m, n, B.rows());
  return out;
}

CommonDivisor gcld(const PolyMat &A, const PolyMat &B) {
  if (A.rows() != B.rows())
    throw DimensionError("gcld needs equal row counts: " + A.dims() + ", " + B.dims());
  auto t = gcrd(A.transpose(), B.transpose());
  return {t.D.transpose(), t.Q1.transpose(), t.Q2.transpose(), t.X1.transpose(),
          t.X2.transpose()};
}

CoprimeCertificate are_right_coprime(const PolyMat &A, const PolyMat &B) {
  if (A.cols() != B.cols())
    throw DimensionError("coprimeness needs equal column counts: " + A.dims() + ", " + B.dims());
  const std::size_t n = A.cols();
  auto sm = smith_form(vstack(A, B));
  CoprimeCertificate out;
  if (sm.nrank < n)
    return out;
  for (auto &phi : sm.invariant_factors)
    if (phi.degree() > 0)
      return out;
  // E_inv * W = S * F = [F; 0]
  PolyMat X = sm.F_inv * sm.E_inv.block(0, 0, n, A.rows() + B.rows());
  out.coprime = true;
  out.X = X.block(0, 0, n, A.rows());
  out.Y = X.block(0, A.rows(), n, B.rows());
  return out;
}

CoprimeCertificate are_left_coprime(const PolyMat &A, const PolyMat &B) {
  if (A.rows() != B.rows())
    throw DimensionError("coprimeness needs equal row counts: " + A.dims() + ", " + B.dims());
  auto t = are_right_coprime(A.transpose(), B.transpose());
  if (t.coprime) {
    t.X = t.X.transpose();
    t.Y = t.Y.transpose();
  }
  return t;
}

Completion coprime_completion(const PolyMat &A, const PolyMat &B) {
  if (A.cols() != B.cols())
    throw DimensionError("completion needs equal column counts: " + A.dims() + ", " + B.dims());
  const std::size_t n = A.cols(), k = A.rows() + B.rows();
  if (n > k)
    throw NotCoprimeError("completion: more columns than rows");
  auto sm = smith_form(vstack(A, B));
  bool ok = sm.nrank == n;
  for (auto &phi : sm.invariant_factors)
    ok = ok && phi.degree() == 0;
  if (!ok)
    throw NotCoprimeError("completion: matrices are not right coprime");
  // [W, E2] = E * diag(F, I)
  return {sm.E.block(0, n, A.rows(), k - n), sm.E.block(A.rows(), n, B.rows(), k - n)};
}

Completion row_completion(const PolyMat &A, const PolyMat &B) {
  if (A.rows() != B.rows())
    throw DimensionError("row completion needs equal row counts: " + A.dims() + ", " + B.dims());
  auto t = coprime_completion(A.transpose(), B.transpose());
  return {t.C.transpose(), t.D.transpose()};
}

BezoutSolution solve_bezout(const PolyMat &A, const PolyMat &B, const PolyMat &C) {
  if (A.cols() != B.cols() || A.cols() != C.cols())
    throw DimensionError("bezout needs equal column counts");
  const std::size_t n = A.cols(), k = A.rows() + B.rows();
  PolyMat W = vstack(A, B);
  auto sm = smith_form(W);
  const std::size_t r = sm.nrank;
  // C = R * diag(phi) * F[0:r] is solvable iff C * F_inv has the matching shape
  PolyMat CV = C * sm.F_inv;
  BezoutSolution out;
  PolyMat R(C.rows(), r);
  bool ok = true;
  for (std::size_t i = 0; i < C.rows() && ok; ++i)
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (j < r) {
        auto [q, rem] = divmod(CV(i, j), sm.invariant_factors[j]);
        ok = rem.is_zero();
        R(i, j) = std::move(q);
      } else {
        ok = CV(i, j).is_zero();
      }
    }
  if (!ok) {
    out.divisor = r == n ? gcrd(A, B).D : scaled_rows(sm.F, sm.invariant_factors);
    return out;
  }
  PolyMat X = R * sm.E_inv.block(0, 0, r, k);
  out.solvable = true;
  out.X = X.block(0, 0, C.rows(), A.rows());
  out.Y = X.block(0, A.rows(), C.rows(), B.rows());
  return out;
}

} // namespace meromat
