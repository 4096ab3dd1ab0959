#pragma once

#include "meromat/divisor.hpp"
#include "meromat/polymat.hpp"

#include <vector>

namespace meromat {

// Linear algebra over the field of rational functions (Gauss-Jordan).
RatFn det(const RatMat &A);
std::size_t rank(const RatMat &A);
// A^-1 * B for regular square A; throws InputError when A is singular.
RatMat solve(const RatMat &A, const RatMat &B);
RatMat inverse(const RatMat &A);
RatMat inverse(const PolyMat &A);

// M = E * Sigma * F with E, F unimodular polynomial matrices and
// Sigma = diag(phi_j / psi_j) padded with zeros.
struct SmithMcMillanDecomposition {
  PolyMat E, F, E_inv, F_inv;
  std::vector<Poly> zero_factors; // phi_j
  std::vector<Poly> pole_factors; // psi_j
  std::size_t nrank = 0;
  RatMat Sigma;
  Poly zero_product() const; // phi_A
  Poly pole_product() const; // psi_A
};

SmithMcMillanDecomposition smith_mcmillan(const RatMat &M);

struct PointClassification {
  PointSet eig; // zeros of phi_A that are not zeros of psi_A
  PointSet eip; // common zeros of phi_A and psi_A (eigenpoles)
  Divisor poles, zeros;
};
PointClassification classify_points(const RatMat &M);

struct IndexTuple {
  GaussRat point;
  std::vector<long> values;
};
IndexTuple zero_index(const RatMat &M, const GaussRat &at);
IndexTuple pole_index(const RatMat &M, const GaussRat &at);
IndexTuple pole_zero_index(const RatMat &M, const GaussRat &at);
// Same tuples read off an existing decomposition.
IndexTuple pole_zero_index(const SmithMcMillanDecomposition &sm, const GaussRat &at);

enum class Side { Left, Right };

// Right: M = N * D^-1.  Left: M = D^-1 * N.
struct Mfd {
  PolyMat N, D;
  Side side = Side::Right;
  bool coprime = false;
  RatMat value() const;
};
Mfd right_coprime_mfd(const RatMat &M);
Mfd left_coprime_mfd(const RatMat &M);
// Recomputes the coprime flag from the Smith form of the stacked pair.
bool mfd_coprime(const Mfd &mfd);
// Unimodular U with N1 = N2 U, D1 = D2 U (right) or N1 = U N2, D1 = U D2 (left).
PolyMat mfd_unit_relator(const Mfd &m1, const Mfd &m2);

Divisor least_order(const RatMat &M);
long least_order_total(const RatMat &M);
// Entrywise split M = P + G_sp into polynomial and strictly proper parts.
std::pair<PolyMat, RatMat> polynomial_split(const RatMat &M);
long mcmillan_degree(const RatMat &M);

} // namespace meromat
