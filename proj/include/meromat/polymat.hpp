#pragma once

#include "meromat/matrix.hpp"

#include <vector>

namespace meromat {

// A = E * S * F with E, F unimodular and S = diag(phi_1..phi_r) padded with zeros.
// E_inv and F_inv are the polynomial inverses, tracked alongside.
struct SmithDecomposition {
  PolyMat E, S, F;
  PolyMat E_inv, F_inv;
  std::vector<Poly> invariant_factors;
  std::size_t nrank = 0;
};

SmithDecomposition smith_form(const PolyMat &A);
std::size_t nrank(const PolyMat &A);
Poly det(const PolyMat &A);
bool is_unimodular(const PolyMat &A);
// Polynomial inverse of a unimodular matrix; throws InputError otherwise.
PolyMat unimodular_inverse(const PolyMat &U);

// Upper triangular, monic diagonal, entries above the diagonal reduced modulo
// it: the canonical representative of the left unit class of a regular A.
struct HermiteForm {
  PolyMat H;     // U * A
  PolyMat U, U_inv;
};
HermiteForm hermite_form(const PolyMat &A);

// A = E1 * DR with E1 left invertible (left_inverse * E1 = I) and DR of full row rank.
struct RightStructure {
  PolyMat E1, DR, left_inverse;
};
RightStructure right_structure(const PolyMat &A);

// Right case: A = Q1 D, B = Q2 D, X1 A + X2 B = D.
// Left case:  A = D Q1, B = D Q2, A X1 + B X2 = D.
struct CommonDivisor {
  PolyMat D, Q1, Q2, X1, X2;
};
CommonDivisor gcrd(const PolyMat &A, const PolyMat &B);
CommonDivisor gcld(const PolyMat &A, const PolyMat &B);

// Right: X A + Y B = I.  Left: A X + B Y = I.  X, Y empty when not coprime.
struct CoprimeCertificate {
  bool coprime = false;
  PolyMat X, Y;
};
CoprimeCertificate are_right_coprime(const PolyMat &A, const PolyMat &B);
CoprimeCertificate are_left_coprime(const PolyMat &A, const PolyMat &B);

// Blocks C, D such that [[A, C], [B, D]] is unimodular.
struct Completion {
  PolyMat C, D;
};
Completion coprime_completion(const PolyMat &A, const PolyMat &B);
// Dual: rows [P Q] such that [[A, B], [P, Q]] is unimodular, for left coprime A, B.
Completion row_completion(const PolyMat &A, const PolyMat &B);

// X A + Y B = C. When unsolvable, `divisor` holds the gcrd of A, B (or the
// full-row-rank right structure of [A; B] when that stack is rank deficient).
struct BezoutSolution {
  bool solvable = false;
  PolyMat X, Y;
  PolyMat divisor;
};
BezoutSolution solve_bezout(const PolyMat &A, const PolyMat &B, const PolyMat &C);

} // namespace meromat
