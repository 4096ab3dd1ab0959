#include "meromat/sysmat.hpp"

namespace meromat {

namespace {

void require(bool ok, const std::string &what) {
  if (!ok)
    throw DimensionError(what);
}

PolyMat zeros(std::size_t r, std::size_t c) { return PolyMat(r, c); }

// [[I_{p-k}, 0], [0, X]] for square X of size k.
PolyMat pad(const PolyMat &X, std::size_t p) {
  require(p >= X.rows(), "padding smaller than block");
  return direct_sum(PolyMat::identity(p - X.rows()), X);
}

} // namespace

Amd::Amd(PolyMat a, PolyMat b, PolyMat c, PolyMat d, Ring rg)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), ring(rg) {
  require(A.square(), "state block must be square, got " + A.dims());
  require(B.rows() == A.rows(), "B must have " + std::to_string(A.rows()) + " rows");
  require(C.cols() == A.rows(), "C must have " + std::to_string(A.rows()) + " columns");
  require(D.rows() == C.rows() && D.cols() == B.cols(),
          "D must be " + std::to_string(C.rows()) + "x" + std::to_string(B.cols()));
  if (det(A).is_zero())
    throw InputError("state block is singular (det A = 0)");
}

Amd Amd::from_system_matrix(const PolyMat &H, std::size_t r, Ring ring) {
  require(r <= H.rows() && r <= H.cols(), "state size exceeds system matrix " + H.dims());
  const std::size_t m = H.rows() - r, n = H.cols() - r;
  PolyMat C = H.block(r, 0, m, r).map([](const Poly &p) { return -p; });
  return Amd(H.block(0, 0, r, r), H.block(0, r, r, n), C, H.block(r, r, m, n), ring);
}

Amd Amd::rmf(const PolyMat &N_R, const PolyMat &D_R) {
  const std::size_t n = D_R.rows();
  return Amd(D_R, PolyMat::identity(n), N_R, zeros(N_R.rows(), n));
}

Amd Amd::lmf(const PolyMat &D_L, const PolyMat &N_L) {
  const std::size_t m = D_L.rows();
  return Amd(D_L, N_L, PolyMat::identity(m), zeros(m, N_L.cols()));
}

PolyMat Amd::system_matrix() const {
  return blocks(A, B, C.map([](const Poly &p) { return -p; }), D);
}

PolyMat Amd::padded(std::size_t k) const {
  return direct_sum(PolyMat::identity(k), system_matrix());
}

RatMat transfer_function(const Amd &H) {
  return to_ratmat(H.D) + to_ratmat(H.C) * solve(to_ratmat(H.A), to_ratmat(H.B));
}

bool is_irreducible(const Amd &H) {
  return are_left_coprime(H.A, H.B).coprime && are_right_coprime(H.A, H.C).coprime;
}

Divisor amd_order(const Amd &H) { return Divisor::of_poly(det(H.A)); }

bool verify_fse(const Amd &H1, const Amd &H2, const FseWitness &w) {
  const std::size_t r = H1.states(), l = H2.states(), m = H1.outputs(), n = H1.inputs();
  require(H2.outputs() == m && H2.inputs() == n, "fse: AMDs have different input/output sizes");
  if (w.M.rows() != l || w.M.cols() != r || w.N.rows() != l || w.N.cols() != r ||
      w.X.rows() != m || w.X.cols() != r || w.Y.rows() != l || w.Y.cols() != n)
    throw DimensionError("fse: witness blocks have wrong dimensions");
  PolyMat left = blocks(w.M, zeros(l, m), w.X, PolyMat::identity(m)) * H1.system_matrix();
  PolyMat right = H2.system_matrix() * blocks(w.N, w.Y, zeros(n, r), PolyMat::identity(n));
  if (left != right)
    return false;
  return are_left_coprime(w.M, H2.A).coprime && are_right_coprime(H1.A, w.N).coprime;
}

bool verify_rse(const Amd &H1, const Amd &H2, const RseWitness &w) {
  const std::size_t r = H1.states(), l = H2.states(), m = H1.outputs(), n = H1.inputs();
  require(H2.outputs() == m && H2.inputs() == n, "rse: AMDs have different input/output sizes");
  const std::size_t p = w.p();
  if (p < std::max(r, l) || !w.M.square() || w.N.rows() != p || !w.N.square() ||
      w.X.rows() != m || w.X.cols() != p || w.Y.rows() != p || w.Y.cols() != n)
    throw DimensionError("rse: witness blocks have wrong dimensions");
  if (!is_unimodular(w.M) || !is_unimodular(w.N))
    return false;
  PolyMat left = blocks(w.M, zeros(p, m), w.X, PolyMat::identity(m)) * H1.padded(p - r) *
                 blocks(w.N, w.Y, zeros(n, p), PolyMat::identity(n));
  return left == H2.padded(p - l);
}

RseWitness fse_to_rse(const Amd &H1, const Amd &H2, const FseWitness &w) {
  const std::size_t r = H1.states(), l = H2.states(), n = H1.inputs();
  // A2 Xh + M Yh = I and Xt N + Yt A1 = I
  auto left = are_left_coprime(H2.A, w.M);
  auto right = are_right_coprime(w.N, H1.A);
  if (!left.coprime || !right.coprime)
    throw NotCoprimeError("fse witness violates its coprimeness conditions");
  const PolyMat &Xh = left.X, &Yh = left.Y;
  PolyMat Xt = right.X, Yt = right.Y;
  // [[-Xt, Yt], [A2, M]] [[-N, Xh], [A1, Yh]] = [[I, W], [0, I]]; clear W
  PolyMat W = Yt * Yh - Xt * Xh;
  Xt = Xt + W * H2.A;
  Yt = Yt - W * w.M;
  auto neg = [](const PolyMat &X) { return X.map([](const Poly &p) { return -p; }); };

  // X (I_l (+) H1) = (I_r (+) H2) Y with Y = [[Yb, Yc], [0, I]]
  PolyMat Mr = blocks(neg(Xt), Yt, H2.A, w.M);
  PolyMat Xr = hstack(neg(H2.C), w.X);
  PolyMat Yb = blocks(neg(Xt), Yt * H1.A, PolyMat::identity(l), w.N);
  PolyMat Yc = vstack(Yt * H1.B, w.Y);
  PolyMat Yb_inv = unimodular_inverse(Yb);
  RseWitness out{Mr, Yb_inv, Xr, neg(Yb_inv * Yc)};
  return pad_rse(out, std::max(r + l, std::max(r, l) + n));
}

FseWitness rse_to_fse(const Amd &H1, const Amd &H2, const RseWitness &w) {
  const std::size_t r = H1.states(), l = H2.states(), p = w.p();
  // move the right factor over: X (I (+) H1) = (I (+) H2) [[N^-1, -N^-1 Y], [0, I]]
  PolyMat Ni = unimodular_inverse(w.N);
  PolyMat Yi = (Ni * w.Y).map([](const Poly &q) { return -q; });
  return {w.M.block(p - l, p - r, l, r), Ni.block(p - l, p - r, l, r),
          w.X.block(0, p - r, w.X.rows(), r), Yi.block(p - l, 0, l, Yi.cols())};
}

RseWitness pad_rse(const RseWitness &w, std::size_t p) {
  const std::size_t q = w.p();
  if (p <= q)
    return w;
  return {pad(w.M, p), pad(w.N, p), hstack(zeros(w.X.rows(), p - q), w.X),
          vstack(zeros(p - q, w.Y.cols()), w.Y)};
}

RseWitness invert_rse(const RseWitness &w) {
  PolyMat Mi = unimodular_inverse(w.M), Ni = unimodular_inverse(w.N);
  auto neg = [](const PolyMat &X) { return X.map([](const Poly &p) { return -p; }); };
  return {Mi, Ni, neg(w.X * Mi), neg(Ni * w.Y)};
}

RseWitness compose_rse(const RseWitness &first, const RseWitness &second) {
  const std::size_t p = std::max(first.p(), second.p());
  RseWitness a = pad_rse(first, p), b = pad_rse(second, p);
  return {b.M * a.M, a.N * b.N, b.X * a.M + a.X, a.N * b.Y + a.Y};
}

Reduction to_rmf(const Amd &H) {
  const std::size_t r = H.states(), n = H.inputs();
  if (!are_left_coprime(H.A, H.B).coprime)
    throw NotCoprimeError("to_rmf: A and B are not left coprime");
  // T = [[A, B], [-N, -Y]] unimodular
  auto comp = row_completion(H.A, H.B);
  PolyMat T = blocks(H.A, H.B, comp.C, comp.D);
  PolyMat Ti = unimodular_inverse(T);
  PolyMat T1 = Ti.block(0, 0, r, r), T2 = Ti.block(0, r, r, n);
  PolyMat M = Ti.block(r, 0, n, r), DR = Ti.block(r, r, n, n);
  PolyMat N = comp.C.map([](const Poly &p) { return -p; });
  PolyMat Y = comp.D.map([](const Poly &p) { return -p; });
  PolyMat X = H.C * T1 - H.D * M;
  PolyMat NR = H.D * DR - H.C * T2;
  return {Amd::rmf(NR, DR), {M, N, X, Y}};
}

Reduction to_lmf(const Amd &H) {
  const std::size_t r = H.states(), m = H.outputs();
  if (!are_right_coprime(H.A, H.C).coprime)
    throw NotCoprimeError("to_lmf: A and C are not right coprime");
  // [[A, P], [C, Q]] unimodular; its inverse has bottom rows [K, L] with K A + L C = 0
  auto comp = coprime_completion(H.A, H.C);
  PolyMat T = blocks(H.A, comp.C, H.C, comp.D);
  PolyMat Ti = unimodular_inverse(T);
  PolyMat K = Ti.block(r, 0, m, r), DL = Ti.block(r, r, m, m);
  PolyMat M = K.map([](const Poly &p) { return -p; });
  PolyMat NL = M * H.B + DL * H.D;
  FseWitness w{M, H.C, PolyMat(m, r), H.D.map([](const Poly &p) { return -p; })};
  return {Amd::lmf(DL, NL), w};
}

std::optional<FseWitness> equate_irreducible(const Amd &H1, const Amd &H2) {
  if (!is_irreducible(H1) || !is_irreducible(H2))
    throw InputError("equate_irreducible: AMD is not irreducible");
  if (H1.outputs() != H2.outputs() || H1.inputs() != H2.inputs())
    return std::nullopt;
  if (transfer_function(H1) != transfer_function(H2))
    return std::nullopt;
  auto s1 = to_rmf(H1), s2 = to_rmf(H2);
  Mfd m1{s1.S.C, s1.S.A, Side::Right, true}, m2{s2.S.C, s2.S.A, Side::Right, true};
  PolyMat TR = mfd_unit_relator(m1, m2);
  const std::size_t n = H1.inputs(), m = H1.outputs();
  // S1 = S2 [[T_R, 0], [0, I]]
  FseWitness relator{PolyMat::identity(n), TR, PolyMat(m, n), PolyMat(n, n)};
  RseWitness a = fse_to_rse(H1, s1.S, s1.witness);
  RseWitness b = fse_to_rse(s1.S, s2.S, relator);
  RseWitness c = invert_rse(fse_to_rse(H2, s2.S, s2.witness));
  RseWitness total = compose_rse(compose_rse(a, b), c);
  FseWitness w = rse_to_fse(H1, H2, total);
  if (!verify_fse(H1, H2, w))
    throw AnalysisError("equate_irreducible: composed witness failed verification");
  return w;
}

LeastOrderReport least_order_check(const Amd &H) {
  LeastOrderReport out;
  out.irreducible = is_irreducible(H);
  out.order = amd_order(H);
  out.transfer_least_order = least_order(transfer_function(H));
  out.is_least = out.order == out.transfer_least_order;
  out.consistent = out.is_least == out.irreducible;
  return out;
}

DecouplingReport decouple(const Amd &H) {
  DecouplingReport out;
  auto left = gcld(H.A, H.B);
  auto right = gcrd(left.Q1, H.C);
  out.QL = left.D;
  out.QR = right.D;
  out.reduced = Amd(right.Q1, left.Q2, right.Q2, H.D, H.ring);
  out.input_decoupling = Divisor::of_poly(det(out.QL));
  PolyMat out_div = gcrd(H.A, H.C).D;
  out.output_decoupling = Divisor::of_poly(det(out_div));
  PointSet in_set = out.input_decoupling.support(), out_set = out.output_decoupling.support();
  PointSet qr_set = PointSet::roots_of(det(out.QR));
  out.io_decoupling = out_set.minus(qr_set);
  out.decoupling = in_set.unite(out_set.minus(out.io_decoupling));
  PointSet spectrum = PointSet::roots_of(det(H.A));
  PointSet poles = PointSet::roots_of(smith_mcmillan(transfer_function(H)).pole_product());
  out.spectrum_identity = spectrum == poles.unite(out.decoupling);
  return out;
}

CanonicalFormCheck canonical_form_check(const Amd &H) {
  CanonicalFormCheck out;
  auto sm = smith_mcmillan(transfer_function(H));
  const std::size_t r = H.states();
  std::vector<Poly> psi;
  for (auto it = sm.pole_factors.rbegin(); it != sm.pole_factors.rend(); ++it)
    if (it->degree() > 0)
      psi.push_back(*it);
  if (psi.size() <= r) {
    out.expected_state_factors.assign(r - psi.size(), Poly(1));
    out.expected_state_factors.insert(out.expected_state_factors.end(), psi.begin(), psi.end());
  }
  out.state_factors = smith_form(H.A).invariant_factors;
  out.expected_system_factors.assign(r, Poly(1));
  out.expected_system_factors.insert(out.expected_system_factors.end(), sm.zero_factors.begin(),
                                     sm.zero_factors.end());
  out.system_factors = smith_form(H.system_matrix()).invariant_factors;
  out.matches = out.state_factors == out.expected_state_factors &&
                out.system_factors == out.expected_system_factors;
  return out;
}

} // namespace meromat
