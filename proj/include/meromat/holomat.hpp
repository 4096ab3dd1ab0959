#pragma once

#include "meromat/divisor.hpp"
#include "meromat/sysmat.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace meromat {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Sum of p_j(z) * exp(-tau_j z) with tau_j >= 0 strictly increasing and p_j != 0.
class QuasiPoly {
public:
  struct Term {
    Poly poly;
    mpq_class delay;
    bool operator==(const Term &o) const { return poly == o.poly && delay == o.delay; }
  };

  QuasiPoly() = default;
  QuasiPoly(long c) : QuasiPoly(Poly(c)) {}
  QuasiPoly(const GaussRat &c) : QuasiPoly(Poly(c)) {}
  QuasiPoly(const Poly &p);
  // Merges equal delays and drops zero terms; throws InputError on a negative delay.
  explicit QuasiPoly(std::vector<Term> terms);
  // exp(-tau z)
  static QuasiPoly exp_delay(const mpq_class &tau);

  const std::vector<Term> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_polynomial() const;
  // Throws InputError unless is_polynomial().
  Poly as_poly() const;
  mpq_class max_delay() const;

  QuasiPoly &operator+=(const QuasiPoly &o);
  QuasiPoly &operator-=(const QuasiPoly &o);
  friend QuasiPoly operator+(QuasiPoly a, const QuasiPoly &b) { return a += b; }
  friend QuasiPoly operator-(QuasiPoly a, const QuasiPoly &b) { return a -= b; }
  friend QuasiPoly operator*(const QuasiPoly &a, const QuasiPoly &b);
  QuasiPoly &operator*=(const QuasiPoly &o) { return *this = *this * o; }
  QuasiPoly operator-() const;
  friend bool operator==(const QuasiPoly &a, const QuasiPoly &b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const QuasiPoly &a, const QuasiPoly &b) { return !(a == b); }

  QuasiPoly derivative() const;
  // Throws AnalysisError when exp(-tau z) would overflow (-tau Re z > 700).
  cplx eval(cplx z) const;
  cplx eval_derivative(cplx z) const;
  // Parser-compatible text: "z - exp(-1*z)".
  std::string str() const;

private:
  // double-precision copies of p, p' and tau for evaluation
  struct Numeric {
    std::vector<cplx> p, dp;
    double tau;
  };
  void cache();
  std::vector<Term> terms_;
  std::vector<Numeric> num_;
};

using QuasiPolyMat = Matrix<QuasiPoly>;

QuasiPolyMat to_quasipoly(const PolyMat &A);
QuasiPolyMat to_quasipoly(const ScalarMat &A);
CMat qp_eval(const QuasiPolyMat &M, cplx z);
CMat qp_eval_deriv(const QuasiPolyMat &M, cplx z);

// Anything that can be evaluated with its derivative at a complex point.
class Evaluable {
public:
  virtual ~Evaluable() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual CMat value(cplx z) const = 0;
  virtual CMat derivative(cplx z) const = 0;
  // Upper bound for the pole order at z, given that the disc of radius rho
  // around z holds no other pole.
  virtual int pole_order_bound(cplx, double) const { return 0; }
};

class QpMatrixEval : public Evaluable {
public:
  explicit QpMatrixEval(QuasiPolyMat M) : M_(std::move(M)) {}
  std::size_t rows() const override { return M_.rows(); }
  std::size_t cols() const override { return M_.cols(); }
  CMat value(cplx z) const override { return qp_eval(M_, z); }
  CMat derivative(cplx z) const override { return qp_eval_deriv(M_, z); }

private:
  QuasiPolyMat M_;
};

// Entrywise quotient num(i,j) / den(i,j).
class QpFractionEval : public Evaluable {
public:
  QpFractionEval(QuasiPolyMat num, QuasiPolyMat den);
  std::size_t rows() const override { return num_.rows(); }
  std::size_t cols() const override { return num_.cols(); }
  CMat value(cplx z) const override;
  CMat derivative(cplx z) const override;
  int pole_order_bound(cplx z, double rho) const override;

private:
  QuasiPolyMat num_, den_;
};

class RationalEval : public Evaluable {
public:
  explicit RationalEval(RatMat M);
  std::size_t rows() const override { return M_.rows(); }
  std::size_t cols() const override { return M_.cols(); }
  CMat value(cplx z) const override;
  CMat derivative(cplx z) const override;
  int pole_order_bound(cplx z, double rho) const override;

private:
  RatMat M_;
  Matrix<Poly> dnum_, dden_;
};

class LambdaEval : public Evaluable {
public:
  using Fn = std::function<CMat(cplx)>;
  LambdaEval(std::size_t rows, std::size_t cols, Fn value, Fn derivative)
      : r_(rows), c_(cols), f_(std::move(value)), df_(std::move(derivative)) {}
  std::size_t rows() const override { return r_; }
  std::size_t cols() const override { return c_; }
  CMat value(cplx z) const override { return f_(z); }
  CMat derivative(cplx z) const override { return df_(z); }

private:
  std::size_t r_, c_;
  Fn f_, df_;
};

// System matrix [[A, B], [-C, D]] with quasi-polynomial blocks.
struct QpAmd {
  QuasiPolyMat A, B, C, D;
  QuasiPolyMat system_matrix() const;
  static QpAmd from_amd(const Amd &H);
};

// D + C A^-1 B, evaluated through LU solves.
class TransferEval : public Evaluable {
public:
  explicit TransferEval(QpAmd H);
  std::size_t rows() const override { return H_.C.rows(); }
  std::size_t cols() const override { return H_.B.cols(); }
  CMat value(cplx z) const override;
  CMat derivative(cplx z) const override;
  // zeros of det A inside the disc
  int pole_order_bound(cplx z, double rho) const override;

private:
  QpAmd H_;
};

// Numeric rank with singular values below rel_tol * sigma_max treated as zero.
std::size_t numeric_rank(const CMat &M, double rel_tol = 1e-9);
// Maximum numeric rank over the first `samples` points of a fixed sequence.
std::size_t nrank_sampled(const Evaluable &M, std::size_t samples);
std::size_t nrank_sampled(const QuasiPolyMat &M, std::size_t samples);

struct Contour {
  enum class Kind { Circle, Rectangle };
  Kind kind = Kind::Circle;
  cplx center{0, 0};
  double radius = 1;
  Box box;
  double tol = 1e-8;
  // total number of panel bisections the adaptive quadrature may spend
  int max_subdiv = 2000;

  static Contour circle(cplx center, double radius, double tol = 1e-8, int max_subdiv = 2000);
  static Contour rectangle(const Box &box, double tol = 1e-8, int max_subdiv = 2000);
  // Counter-clockwise parametrization over t in [0, 1].
  cplx point(double t) const;
  cplx tangent(double t) const;
  bool inside(cplx z) const;
  std::string str() const;
};

struct CountResult {
  long n_minus_p = 0;
  cplx raw_integral;
  double residual = 0; // distance of raw_integral to n_minus_p
  bool converged = true; // every panel met the tolerance
  double min_det_ratio = 0; // min |det| / max |det| over the proximity samples
  std::size_t evaluations = 0;
};

// (1/2 pi i) * contour integral of Tr(M^-1 M'). Throws ContourProximityError
// when the contour runs too close to a zero or pole, ConvergenceError when the
// integral is not within 0.25 of an integer.
CountResult count_zeros_minus_poles(const Evaluable &M, const Contour &gamma);
// Throws ContourProximityError when min |det| <= 1e-10 max |det| over 256 points.
double contour_clearance(const Evaluable &M, const Contour &gamma);

struct Root {
  cplx z;
  int multiplicity = 1;
  // half-width of the cell a cluster was resolved to (0 for Newton-polished simple roots)
  double uncertainty = 0;
  double det_abs = 0;
};

struct RootSearch {
  double tol = 1e-12;       // Newton step tolerance (relative)
  double quad_tol = 1e-8;
  int max_subdiv = 2000;
  double cluster_tol = 1e-6; // relative spread below which roots are merged
  double min_cell = 1e-9;   // relative to the initial box
};

struct RootReport {
  long count = 0;
  std::vector<Root> roots;
};

// Zeros of det f in the box; f must have no poles there.
RootReport roots_in_region(const Evaluable &f, const Box &box, const RootSearch &opts = {});

struct LocalIndexOptions {
  std::size_t kmax = 8;
  std::optional<int> pole_order;
  std::optional<double> radius;
  std::size_t nodes = 0; // 0: max(64, 4 kmax)
};

struct LocalIndices {
  std::vector<long> values;
  int pole_order = 0;
  double radius = 0;
  std::vector<std::size_t> toeplitz_ranks;
};

// Pole-zero index at lambda from ranks of block Toeplitz matrices of Taylor
// coefficients. Throws ConvergenceError if kmax does not stabilize the ranks
// and RankAmbiguityError when a singular value falls in the ambiguity band.
LocalIndices local_indices(const Evaluable &M, cplx lambda, const LocalIndexOptions &opts = {});

struct RegionalCoprimality {
  bool coprime = true;
  std::vector<cplx> witnesses;  // points where the stack loses rank
  std::vector<cplx> candidates; // zeros of the square surrogate
};

// Right: [A; B] of full column rank at every point of the box. Left: [A, B] of full row rank.
RegionalCoprimality regional_coprime(const QuasiPolyMat &A, const QuasiPolyMat &B, const Box &box,
                                     Side side, const RootSearch &opts = {});

struct DelayedMatrix {
  mpq_class delay;
  ScalarMat M;
};

// x' = sum A_j x(t - tau_j) + sum B_j u(t - t_j), y = sum C_j x(t - s_j) + sum D_j u(t - h_j).
// A may hold a delay-0 entry (A_0); every list has strictly increasing delays.
struct TdsData {
  std::size_t states = 0, inputs = 0, outputs = 0;
  std::vector<DelayedMatrix> A, B, C, D;
  void validate() const;
};

// [[zI - sum A_j e^{-tau_j z}, sum B_j e^{-t_j z}], [-sum C_j e^{-s_j z}, sum D_j e^{-h_j z}]]
QpAmd build_tds_amd(const TdsData &data);
// Characteristic roots inside the contour (zeros of det of the state block).
CountResult tds_pole_count(const TdsData &data, const Contour &gamma);

} // namespace meromat
