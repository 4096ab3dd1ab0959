#include "meromat/holomat.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace meromat {

namespace {

constexpr double kOverflowExponent = 700;
// Singular values in [1e-11, 1e-7] * sigma_max make a rank decision ambiguous.
constexpr double kRankTol = 1e-9;
constexpr double kAmbiguousLow = 1e-11;
constexpr double kAmbiguousHigh = 1e-7;
// Rank-drop test for candidate points of the coprimality check. Candidates are
// roots located to roughly sqrt(machine eps) when they are multiple.
constexpr double kRankDropTol = 1e-6;

cplx exp_factor(double t, cplx z) {
  if (t == 0)
    return 1.0;
  if (-t * z.real() > kOverflowExponent)
    throw AnalysisError("quasi-polynomial evaluation overflows: exp(" + std::to_string(-t) + "*z) at Re z = " +
                        std::to_string(z.real()));
  return std::exp(-t * z);
}

cplx horner(const std::vector<cplx> &c, cplx z) {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * z + *it;
  return acc;
}

} // namespace

QuasiPoly::QuasiPoly(const Poly &p) {
  if (!p.is_zero())
    terms_.push_back({p, mpq_class(0)});
  cache();
}

void QuasiPoly::cache() {
  num_.clear();
  for (auto &t : terms_)
    num_.push_back({t.poly.to_complex(), t.poly.derivative().to_complex(), t.delay.get_d()});
}

QuasiPoly::QuasiPoly(std::vector<Term> terms) {
  std::map<mpq_class, Poly> by_delay;
  for (auto &t : terms) {
    if (sgn(t.delay) < 0)
      throw InputError("negative delay " + t.delay.get_str() + " in a quasi-polynomial");
    by_delay[t.delay] += t.poly;
  }
  for (auto &[d, p] : by_delay)
    if (!p.is_zero())
      terms_.push_back({p, d});
  cache();
}

QuasiPoly QuasiPoly::exp_delay(const mpq_class &tau) { return QuasiPoly(std::vector<Term>{{Poly(1), tau}}); }

bool QuasiPoly::is_polynomial() const {
  return terms_.empty() || (terms_.size() == 1 && sgn(terms_[0].delay) == 0);
}

Poly QuasiPoly::as_poly() const {
  if (!is_polynomial())
    throw InputError("quasi-polynomial " + str() + " has delay terms");
  return terms_.empty() ? Poly() : terms_[0].poly;
}

mpq_class QuasiPoly::max_delay() const { return terms_.empty() ? mpq_class(0) : terms_.back().delay; }

QuasiPoly &QuasiPoly::operator+=(const QuasiPoly &o) {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return *this = QuasiPoly(std::move(all));
}

QuasiPoly &QuasiPoly::operator-=(const QuasiPoly &o) { return *this += -o; }

QuasiPoly operator*(const QuasiPoly &a, const QuasiPoly &b) {
  std::vector<QuasiPoly::Term> all;
  for (auto &x : a.terms_)
    for (auto &y : b.terms_)
      all.push_back({x.poly * y.poly, x.delay + y.delay});
  return QuasiPoly(std::move(all));
}

QuasiPoly QuasiPoly::operator-() const {
  QuasiPoly q = *this;
  for (auto &t : q.terms_)
    t.poly = -t.poly;
  q.cache();
  return q;
}

QuasiPoly QuasiPoly::derivative() const {
  std::vector<Term> out;
  for (auto &t : terms_)
    out.push_back({t.poly.derivative() - t.poly * GaussRat(t.delay), t.delay});
  return QuasiPoly(std::move(out));
}

cplx QuasiPoly::eval(cplx z) const {
  cplx s = 0;
  for (auto &t : num_)
    s += horner(t.p, z) * exp_factor(t.tau, z);
  return s;
}

cplx QuasiPoly::eval_derivative(cplx z) const {
  cplx s = 0;
  for (auto &t : num_)
    s += (horner(t.dp, z) - t.tau * horner(t.p, z)) * exp_factor(t.tau, z);
  return s;
}

std::string QuasiPoly::str() const {
  if (terms_.empty())
    return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term &t = terms_[k];
    std::string piece;
    if (sgn(t.delay) == 0) {
      piece = t.poly.str();
    } else {
      std::string e = "exp(-" + t.delay.get_str() + "*z)";
      if (t.poly.is_one())
        piece = e;
      else if ((-t.poly).is_one())
        piece = "-" + e;
      else
        piece = "(" + t.poly.str() + ")*" + e;
    }
    if (k == 0)
      out = piece;
    else if (piece.front() == '-')
      out += " - " + piece.substr(1);
    else
      out += " + " + piece;
  }
  return out;
}

QuasiPolyMat to_quasipoly(const PolyMat &A) {
  return A.map([](const Poly &p) { return QuasiPoly(p); });
}

QuasiPolyMat to_quasipoly(const ScalarMat &A) {
  return A.map([](const GaussRat &c) { return QuasiPoly(c); });
}

CMat qp_eval(const QuasiPolyMat &M, cplx z) {
  CMat out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      out(i, j) = M(i, j).eval(z);
  return out;
}

CMat qp_eval_deriv(const QuasiPolyMat &M, cplx z) {
  CMat out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      out(i, j) = M(i, j).eval_derivative(z);
  return out;
}

QpFractionEval::QpFractionEval(QuasiPolyMat num, QuasiPolyMat den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.rows() != den_.rows() || num_.cols() != den_.cols())
    throw DimensionError("numerator " + num_.dims() + " and denominator " + den_.dims() + " differ in shape");
  for (auto &d : den_.data())
    if (d.is_zero())
      throw InputError("zero denominator in a quasi-rational matrix");
}

CMat QpFractionEval::value(cplx z) const {
  CMat out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      out(i, j) = num_(i, j).eval(z) / den_(i, j).eval(z);
  return out;
}

CMat QpFractionEval::derivative(cplx z) const {
  CMat out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) {
      cplx n = num_(i, j).eval(z), d = den_(i, j).eval(z);
      cplx dn = num_(i, j).eval_derivative(z), dd = den_(i, j).eval_derivative(z);
      out(i, j) = (dn * d - n * dd) / (d * d);
    }
  return out;
}

int QpFractionEval::pole_order_bound(cplx z, double rho) const {
  long best = 0;
  for (auto &d : den_.data()) {
    if (d.is_polynomial() && d.as_poly().is_constant())
      continue;
    QpMatrixEval e(QuasiPolyMat{{d}});
    best = std::max(best, count_zeros_minus_poles(e, Contour::circle(z, rho)).n_minus_p);
  }
  return static_cast<int>(best);
}

RationalEval::RationalEval(RatMat M) : M_(std::move(M)) {
  dnum_ = M_.map([](const RatFn &f) { return f.num().derivative(); });
  dden_ = M_.map([](const RatFn &f) { return f.den().derivative(); });
}

CMat RationalEval::value(cplx z) const {
  CMat out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      out(i, j) = M_(i, j).num().eval(z) / M_(i, j).den().eval(z);
  return out;
}

CMat RationalEval::derivative(cplx z) const {
  CMat out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) {
      const RatFn &f = M_(i, j);
      cplx n = f.num().eval(z), d = f.den().eval(z);
      out(i, j) = (dnum_(i, j).eval(z) * d - n * dden_(i, j).eval(z)) / (d * d);
    }
  return out;
}

int RationalEval::pole_order_bound(cplx z, double rho) const {
  int best = 0;
  for (auto &f : M_.data()) {
    if (f.den().is_constant())
      continue;
    int k = 0;
    for (auto r : numeric_roots(f.den()))
      if (std::abs(r - z) < rho)
        ++k;
    best = std::max(best, k);
  }
  return best;
}

QuasiPolyMat QpAmd::system_matrix() const {
  return vstack(hstack(A, B), hstack(-C, D));
}

QpAmd QpAmd::from_amd(const Amd &H) {
  return {to_quasipoly(H.A), to_quasipoly(H.B), to_quasipoly(H.C), to_quasipoly(H.D)};
}

TransferEval::TransferEval(QpAmd H) : H_(std::move(H)) {
  const std::size_t r = H_.A.rows();
  if (!H_.A.square() || H_.B.rows() != r || H_.C.cols() != r || H_.D.rows() != H_.C.rows() ||
      H_.D.cols() != H_.B.cols())
    throw DimensionError("inconsistent AMD blocks");
}

CMat TransferEval::value(cplx z) const {
  Eigen::PartialPivLU<CMat> lu(qp_eval(H_.A, z));
  return qp_eval(H_.D, z) + qp_eval(H_.C, z) * lu.solve(qp_eval(H_.B, z));
}

CMat TransferEval::derivative(cplx z) const {
  Eigen::PartialPivLU<CMat> lu(qp_eval(H_.A, z));
  CMat X = lu.solve(qp_eval(H_.B, z));
  CMat C = qp_eval(H_.C, z);
  return qp_eval_deriv(H_.D, z) + qp_eval_deriv(H_.C, z) * X + C * lu.solve(qp_eval_deriv(H_.B, z)) -
         C * lu.solve(qp_eval_deriv(H_.A, z) * X);
}

int TransferEval::pole_order_bound(cplx z, double rho) const {
  QpMatrixEval a(H_.A);
  return static_cast<int>(count_zeros_minus_poles(a, Contour::circle(z, rho)).n_minus_p);
}

std::size_t numeric_rank(const CMat &M, double rel_tol) {
  if (M.size() == 0)
    return 0;
  Eigen::JacobiSVD<CMat> svd(M);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0)
    return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0))
      ++r;
  return r;
}

std::size_t nrank_sampled(const Evaluable &M, std::size_t samples) {
  if (samples == 0)
    throw InputError("nrank_sampled needs at least one sample");
  std::mt19937_64 gen(0x6d65726fULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::size_t best = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    cplx z(u(gen), u(gen));
    CMat v;
    try {
      v = M.value(z);
    } catch (const AnalysisError &) {
      continue;
    }
    if (!v.allFinite())
      continue;
    best = std::max(best, numeric_rank(v));
  }
  return best;
}

std::size_t nrank_sampled(const QuasiPolyMat &M, std::size_t samples) {
  return nrank_sampled(QpMatrixEval(M), samples);
}

namespace {

// Largest radius 2^-k (k = 0..12) around lambda on which the winding count of
// det M agrees with the count on the smallest circle, halved. Falls back to
// 1/2 when det M is not available (non-square or singular).
double isolating_radius(const Evaluable &M, cplx lambda) {
  if (M.rows() != M.cols())
    return 0.5;
  auto winding = [&](double rho) -> std::optional<long> {
    try {
      return count_zeros_minus_poles(M, Contour::circle(lambda, rho)).n_minus_p;
    } catch (const AnalysisError &) {
      return std::nullopt;
    }
  };
  constexpr int kSteps = 12;
  auto ref = winding(std::ldexp(1.0, -kSteps));
  if (!ref)
    return 0.5;
  double good = std::ldexp(1.0, -kSteps);
  for (int k = kSteps - 1; k >= 0; --k) {
    double rho = std::ldexp(1.0, -k);
    auto w = winding(rho);
    if (!w || *w != *ref)
      break;
    good = rho;
  }
  return good / 2;
}

// Rank with the ambiguity band enforced; the scale is the largest singular value of `scale_of`.
std::size_t checked_rank(const CMat &T, double scale) {
  Eigen::JacobiSVD<CMat> svd(T);
  const auto &s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    double rel = s(k) / scale;
    if (rel > kAmbiguousLow && rel < kAmbiguousHigh)
      throw RankAmbiguityError("ambiguous numeric rank: singular value ratio " + std::to_string(rel));
    if (rel > kRankTol)
      ++r;
  }
  return r;
}

} // namespace

LocalIndices local_indices(const Evaluable &M, cplx lambda, const LocalIndexOptions &opts) {
  if (opts.kmax == 0)
    throw InputError("local_indices needs kmax >= 1");
  LocalIndices out;
  out.radius = opts.radius ? *opts.radius : isolating_radius(M, lambda);
  if (!(out.radius > 0))
    throw InputError("local_indices radius must be positive");
  out.pole_order = opts.pole_order ? *opts.pole_order : M.pole_order_bound(lambda, out.radius);
  if (out.pole_order < 0)
    throw InputError("pole order bound must be nonnegative");

  const std::size_t m = M.rows(), n = M.cols(), K = opts.kmax;
  const std::size_t N = opts.nodes ? opts.nodes : std::max<std::size_t>(64, 4 * K);
  if (N < K)
    throw InputError("local_indices needs at least kmax quadrature nodes");

  // Taylor coefficients of (z - lambda)^s M(z) in the scaled variable w = (z - lambda) / rho.
  std::vector<CMat> coef(K, CMat::Zero(m, n));
  std::size_t nr = 0;
  for (std::size_t j = 0; j < N; ++j) {
    double theta = 2 * M_PI * static_cast<double>(j) / static_cast<double>(N);
    cplx w = std::polar(1.0, theta);
    CMat G = std::pow(out.radius * w, out.pole_order) * M.value(lambda + out.radius * w);
    if (!G.allFinite())
      throw AnalysisError("non-finite value on the Taylor circle around " + std::to_string(lambda.real()) + "+" +
                          std::to_string(lambda.imag()) + "i");
    nr = std::max(nr, numeric_rank(G));
    for (std::size_t k = 0; k < K; ++k)
      coef[k] += G * std::polar(1.0, -theta * static_cast<double>(k));
  }
  for (auto &c : coef)
    c /= static_cast<double>(N);

  // rank T_k - rank T_{k-1} = number of local exponents <= k
  CMat T_full = CMat::Zero(static_cast<Eigen::Index>(K * m), static_cast<Eigen::Index>(K * n));
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      T_full.block(static_cast<Eigen::Index>(a * m), static_cast<Eigen::Index>(b * n),
                   static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = coef[a - b];
  double scale = 0;
  {
    Eigen::JacobiSVD<CMat> svd(T_full);
    if (svd.singularValues().size())
      scale = svd.singularValues()(0);
  }
  if (scale == 0) {
    if (nr == 0)
      return out;
    throw ConvergenceError("Taylor coefficients vanish up to order kmax");
  }
  std::vector<std::size_t> d;
  std::size_t prev = 0;
  for (std::size_t k = 0; k < K; ++k) {
    auto sz_r = static_cast<Eigen::Index>((k + 1) * m), sz_c = static_cast<Eigen::Index>((k + 1) * n);
    std::size_t r = checked_rank(T_full.topLeftCorner(sz_r, sz_c), scale);
    out.toeplitz_ranks.push_back(r);
    if (r < prev)
      throw AnalysisError("inconsistent Toeplitz ranks");
    d.push_back(r - prev);
    prev = r;
  }
  if (d.back() != nr)
    throw ConvergenceError("kmax = " + std::to_string(K) + " too small: ranks have not stabilized (" +
                           std::to_string(d.back()) + " of " + std::to_string(nr) + ")");
  std::size_t before = 0;
  for (std::size_t k = 0; k < K; ++k) {
    if (d[k] < before)
      throw AnalysisError("rank increments decrease; Taylor data inconsistent");
    for (std::size_t c = before; c < d[k]; ++c)
      out.values.push_back(static_cast<long>(k) - out.pole_order);
    before = d[k];
  }
  return out;
}

RegionalCoprimality regional_coprime(const QuasiPolyMat &A, const QuasiPolyMat &B, const Box &box, Side side,
                                     const RootSearch &opts) {
  const bool right = side == Side::Right;
  QuasiPolyMat S = right ? vstack(A, B) : hstack(A, B);
  const std::size_t n = right ? S.cols() : S.rows();
  if (nrank_sampled(S, 16) != n)
    throw RankDeficientError("stacked matrix " + S.dims() + " is not of full normal rank");

  // Every rank drop of S is a zero of det(R S) (right) or det(S R) (left) for any constant R.
  std::mt19937_64 gen(0x636f7072ULL);
  std::normal_distribution<double> g;
  const std::size_t other = right ? S.rows() : S.cols();
  CMat R(static_cast<Eigen::Index>(right ? n : other), static_cast<Eigen::Index>(right ? other : n));
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index j = 0; j < R.cols(); ++j)
      R(i, j) = cplx(g(gen), g(gen));
  LambdaEval surrogate(
      n, n, [&](cplx z) -> CMat { return right ? CMat(R * qp_eval(S, z)) : CMat(qp_eval(S, z) * R); },
      [&](cplx z) -> CMat { return right ? CMat(R * qp_eval_deriv(S, z)) : CMat(qp_eval_deriv(S, z) * R); });

  // rank drops are judged against the size of S over the box, not at the
  // candidate itself where every entry may vanish
  double scale = 0;
  Contour rim = Contour::rectangle(box);
  for (int k = 0; k < 64; ++k) {
    Eigen::JacobiSVD<CMat> svd(qp_eval(S, rim.point(k / 64.0)));
    scale = std::max(scale, svd.singularValues()(0));
  }
  RegionalCoprimality out;
  for (auto &root : roots_in_region(surrogate, box, opts).roots) {
    out.candidates.push_back(root.z);
    Eigen::JacobiSVD<CMat> svd(qp_eval(S, root.z));
    const auto &sv = svd.singularValues();
    double smallest = sv.size() < static_cast<Eigen::Index>(n) ? 0.0 : sv(static_cast<Eigen::Index>(n) - 1);
    if (smallest <= kRankDropTol * scale)
      out.witnesses.push_back(root.z);
  }
  out.coprime = out.witnesses.empty();
  return out;
}

} // namespace meromat
