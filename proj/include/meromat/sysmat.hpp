#pragma once

#include "meromat/ratmat.hpp"

#include <optional>

namespace meromat {

enum class Ring { Polynomial, Rational };

// System matrix [[A, B], [-C, D]] with regular r x r state block A.
struct Amd {
  PolyMat A, B, C, D;
  Ring ring = Ring::Polynomial;

  Amd() = default;
  // Checks block shapes and regularity of A.
  Amd(PolyMat A, PolyMat B, PolyMat C, PolyMat D, Ring ring = Ring::Polynomial);
  // Splits a full (r+m) x (r+n) system matrix.
  static Amd from_system_matrix(const PolyMat &H, std::size_t r, Ring ring = Ring::Polynomial);
  // [[D_R, I], [-N_R, 0]] and [[D_L, N_L], [-I, 0]].
  static Amd rmf(const PolyMat &N_R, const PolyMat &D_R);
  static Amd lmf(const PolyMat &D_L, const PolyMat &N_L);

  std::size_t states() const { return A.rows(); }
  std::size_t outputs() const { return C.rows(); }
  std::size_t inputs() const { return B.cols(); }
  PolyMat system_matrix() const;
  // I_k (+) H.
  PolyMat padded(std::size_t k) const;
  bool operator==(const Amd &) const = default;
};

RatMat transfer_function(const Amd &H);
bool is_irreducible(const Amd &H);
Divisor amd_order(const Amd &H);

// [[M, 0], [X, I]] H1 = H2 [[N, Y], [0, I]]; M, N are l x r, X is m x r, Y is l x n.
struct FseWitness {
  PolyMat M, N, X, Y;
};

// [[M, 0], [X, I]] (I_{p-r} (+) H1) [[N, Y], [0, I]] = I_{p-l} (+) H2 with M, N unimodular p x p.
struct RseWitness {
  PolyMat M, N, X, Y;
  std::size_t p() const { return M.rows(); }
};

bool verify_fse(const Amd &H1, const Amd &H2, const FseWitness &w);
bool verify_rse(const Amd &H1, const Amd &H2, const RseWitness &w);

// Conversions between the two witness kinds.
RseWitness fse_to_rse(const Amd &H1, const Amd &H2, const FseWitness &w);
FseWitness rse_to_fse(const Amd &H1, const Amd &H2, const RseWitness &w);
// Same relation with a larger padding p.
RseWitness pad_rse(const RseWitness &w, std::size_t p);
// Witness of H2 ~ H1 from one of H1 ~ H2.
RseWitness invert_rse(const RseWitness &w);
// H1 ~ H2 (first) and H2 ~ H3 (second) give H1 ~ H3; paddings are equalized.
RseWitness compose_rse(const RseWitness &first, const RseWitness &second);

struct Reduction {
  Amd S;
  FseWitness witness;
};
// RMF form equivalent to H; needs A, B left coprime.
Reduction to_rmf(const Amd &H);
// LMF form equivalent to H; needs A, C right coprime.
Reduction to_lmf(const Amd &H);

// fse witness H1 -> H2 for irreducible AMDs with equal transfer functions;
// nullopt when the transfer functions differ.
std::optional<FseWitness> equate_irreducible(const Amd &H1, const Amd &H2);

struct LeastOrderReport {
  bool irreducible = false;
  Divisor order;
  Divisor transfer_least_order;
  bool is_least = false;
  // is_least agrees with irreducible
  bool consistent = false;
};
LeastOrderReport least_order_check(const Amd &H);

struct DecouplingReport {
  Divisor input_decoupling;  // zeros of det Q_L
  Divisor output_decoupling; // zeros of det gcrd(A, C)
  PointSet io_decoupling;
  PointSet decoupling;
  Amd reduced;
  PolyMat QL, QR;
  // zeros of det A = poles of the transfer function together with the decoupling set
  bool spectrum_identity = false;
};
DecouplingReport decouple(const Amd &H);

// Invariant factors of A and of H next to those predicted from the
// Smith-McMillan form of the transfer function.
struct CanonicalFormCheck {
  std::vector<Poly> state_factors, expected_state_factors;
  std::vector<Poly> system_factors, expected_system_factors;
  bool matches = false;
};
CanonicalFormCheck canonical_form_check(const Amd &H);

} // namespace meromat
