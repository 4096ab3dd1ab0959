#include "support.hpp"

#include <gtest/gtest.h>

using namespace meromat;
using testsupport::Rng;

namespace {

const Poly z = Poly::z();
Poly c(long v) { return Poly(v); }
GaussRat q(long v) { return GaussRat(mpq_class(v)); }
RatFn r(const Poly &n, const Poly &d = Poly(1)) { return RatFn(n, d); }

PolyMat P(std::initializer_list<std::initializer_list<Poly>> rows) { return PolyMat(rows); }

// A = diag(z, z-1), B = [1; 0], C = [1 0], D = 0: transfer 1/z, z-1 decoupled
Amd worked_example() {
  return Amd(P({{z, c(0)}, {c(0), z - 1}}), P({{c(1)}, {c(0)}}), P({{c(1), c(0)}}), P({{c(0)}}));
}

FseWitness identity_fse(const Amd &H) {
  const std::size_t r = H.states();
  return {PolyMat::identity(r), PolyMat::identity(r), PolyMat(H.outputs(), r),
          PolyMat(r, H.inputs())};
}

Amd scramble(Rng &rng, const Amd &H) {
  PolyMat U = testsupport::random_unimodular(rng, H.states());
  PolyMat V = testsupport::random_unimodular(rng, H.states());
  return Amd(U * H.A * V, U * H.B, H.C * V, H.D);
}

} // namespace

TEST(Transfer, Examples) {
  Poly p = z * z + 1, qq = z * z * z - c(2) * z;
  Amd H(P({{qq}}), P({{c(1)}}), P({{p}}), P({{c(0)}}));
  EXPECT_EQ(transfer_function(H), (RatMat{{r(p, qq)}}));
  EXPECT_EQ(det(H.system_matrix()), p);

  PolyMat NR = P({{z, c(1)}}), DR = P({{z * z, c(1)}, {c(0), z}});
  EXPECT_EQ(transfer_function(Amd::rmf(NR, DR)), to_ratmat(NR) * inverse(DR));

  EXPECT_EQ(transfer_function(worked_example()), (RatMat{{r(c(1), z)}}));
  EXPECT_THROW(Amd(P({{c(0)}}), P({{c(1)}}), P({{c(1)}}), P({{c(0)}})), InputError);
  EXPECT_THROW(Amd(P({{z}}), P({{c(1)}, {c(1)}}), P({{c(1)}}), P({{c(0)}})), DimensionError);
}

TEST(Irreducible, Examples) {
  EXPECT_TRUE(is_irreducible(Amd::rmf(P({{c(1)}}), P({{z}}))));
  EXPECT_FALSE(is_irreducible(worked_example()));
  // controllable and observable double integrator
  Amd ss(P({{z, c(-1)}, {c(0), z}}), P({{c(0)}, {c(1)}}), P({{c(1), c(0)}}), P({{c(0)}}));
  EXPECT_TRUE(is_irreducible(ss));
}

TEST(Equivalence, IdentityAndWrongSign) {
  Amd H = worked_example();
  EXPECT_TRUE(verify_fse(H, H, identity_fse(H)));
  auto w = identity_fse(H);
  w.X = P({{c(-1), c(0)}});
  EXPECT_FALSE(verify_fse(H, H, w));
  RseWitness rw{PolyMat::identity(2), PolyMat::identity(2), PolyMat(1, 2), PolyMat(2, 1)};
  EXPECT_TRUE(verify_rse(H, H, rw));
  rw.X = P({{c(-1), c(0)}});
  EXPECT_FALSE(verify_rse(H, H, rw));
}

TEST(ToRmf, Examples) {
  Amd H(P({{z}}), P({{c(1)}}), P({{c(1)}}), P({{c(0)}}));
  auto red = to_rmf(H);
  EXPECT_TRUE(verify_fse(H, red.S, red.witness));
  EXPECT_EQ(transfer_function(red.S), (RatMat{{r(c(1), z)}}));
  EXPECT_EQ(red.S.A(0, 0).monic(), z);

  Amd R = Amd::rmf(P({{z + 1}}), P({{z * z}}));
  auto rr = to_rmf(R);
  EXPECT_TRUE(verify_fse(R, rr.S, rr.witness));
  EXPECT_EQ(transfer_function(rr.S), transfer_function(R));

  // A, B not left coprime
  EXPECT_THROW(to_rmf(worked_example()), NotCoprimeError);
}

TEST(ToRmf, RandomLeftCoprime) {
  Rng rng(21);
  for (int t = 0; t < 12; ++t) {
    Amd H = testsupport::random_pmd(rng, 2, 1 + t % 2, 1 + (t / 2) % 2);
    if (!are_left_coprime(H.A, H.B).coprime)
      continue;
    auto red = to_rmf(H);
    ASSERT_TRUE(verify_fse(H, red.S, red.witness));
    EXPECT_EQ(transfer_function(red.S), transfer_function(H));
    EXPECT_EQ(amd_order(H), amd_order(red.S));
    if (is_irreducible(H)) {
      EXPECT_TRUE(are_right_coprime(red.S.A, red.S.C).coprime);
      // padded state blocks are equivalent through the rse witness
      RseWitness rw = fse_to_rse(H, red.S, red.witness);
      const std::size_t p = rw.p();
      EXPECT_EQ(rw.M * direct_sum(PolyMat::identity(p - 2), H.A) * rw.N,
                direct_sum(PolyMat::identity(p - H.inputs()), red.S.A));
    }
  }
}

TEST(ToLmf, Random) {
  Rng rng(22);
  Amd H(P({{z}}), P({{c(1)}}), P({{c(1)}}), P({{c(2)}}));
  auto red = to_lmf(H);
  EXPECT_TRUE(verify_fse(H, red.S, red.witness));
  for (int t = 0; t < 10; ++t) {
    Amd G = testsupport::random_pmd(rng, 2, 1 + t % 2, 1 + (t / 2) % 2);
    if (!are_right_coprime(G.A, G.C).coprime)
      continue;
    auto lr = to_lmf(G);
    ASSERT_TRUE(verify_fse(G, lr.S, lr.witness));
    EXPECT_EQ(transfer_function(lr.S), transfer_function(G));
    if (is_irreducible(G))
      EXPECT_TRUE(are_left_coprime(lr.S.A, lr.S.B).coprime);
  }
}

TEST(RseFse, RoundTrips) {
  Rng rng(23);
  for (int t = 0; t < 8; ++t) {
    Amd H = testsupport::irreducible(rng, [](Rng &g) { return testsupport::random_pmd(g, 2, 1, 1); });
    Amd G = scramble(rng, H);
    auto s = to_rmf(H);
    RseWitness rw = fse_to_rse(H, s.S, s.witness);
    EXPECT_TRUE(verify_rse(H, s.S, rw));
    EXPECT_TRUE(verify_rse(s.S, H, invert_rse(rw)));
    EXPECT_TRUE(verify_fse(H, s.S, rse_to_fse(H, s.S, rw)));
    EXPECT_TRUE(verify_rse(H, s.S, pad_rse(rw, rw.p() + 2)));
    auto w = equate_irreducible(H, G);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(verify_fse(H, G, *w));
  }
}

TEST(Equate, Examples) {
  Amd a(P({{z}}), P({{c(1)}}), P({{c(1)}}), P({{c(0)}}));
  Amd b = Amd::rmf(P({{c(2)}}), P({{c(2) * z}}));
  auto w = equate_irreducible(a, a);
  ASSERT_TRUE(w);
  EXPECT_TRUE(verify_fse(a, a, *w));
  auto w2 = equate_irreducible(a, b);
  ASSERT_TRUE(w2);
  EXPECT_TRUE(verify_fse(a, b, *w2));
  Amd other(P({{z - 1}}), P({{c(1)}}), P({{c(1)}}), P({{c(0)}}));
  EXPECT_FALSE(equate_irreducible(a, other).has_value());
  EXPECT_THROW(equate_irreducible(worked_example(), a), InputError);
}

TEST(Equate, MinimalRealizationsOfRandomTransfer) {
  Rng rng(24);
  for (int t = 0; t < 5; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 2, 2, 1);
    auto R = right_coprime_mfd(M);
    auto L = left_coprime_mfd(M);
    Amd HR = Amd::rmf(R.N, R.D), HL = Amd::lmf(L.D, L.N);
    ASSERT_TRUE(is_irreducible(HR));
    ASSERT_TRUE(is_irreducible(HL));
    auto w = equate_irreducible(HR, HL);
    ASSERT_TRUE(w);
    EXPECT_TRUE(verify_fse(HR, HL, *w));
    EXPECT_EQ(amd_order(HR), amd_order(HL));
  }
}

TEST(Order, Examples) {
  Amd a = worked_example();
  auto d = amd_order(a);
  EXPECT_EQ(d.at(q(0)), 1);
  EXPECT_EQ(d.at(q(1)), 1);
  EXPECT_EQ(d.total(), 2);
  Amd u(P({{c(1), z}, {c(0), c(1)}}), P({{c(1)}, {c(0)}}), P({{c(1), c(0)}}), P({{c(0)}}));
  EXPECT_TRUE(amd_order(u).empty());
  Amd j(P({{z, c(1)}, {c(0), z}}), P({{c(1)}, {c(0)}}), P({{c(1), c(0)}}), P({{c(0)}}));
  EXPECT_EQ(amd_order(j).at(q(0)), 2);
}

TEST(LeastOrderCheck, Examples) {
  auto a = least_order_check(Amd::rmf(P({{c(1)}}), P({{z}})));
  EXPECT_TRUE(a.is_least);
  EXPECT_TRUE(a.irreducible);
  EXPECT_EQ(a.order.at(q(0)), 1);
  auto b = least_order_check(worked_example());
  EXPECT_FALSE(b.is_least);
  EXPECT_FALSE(b.irreducible);
  EXPECT_TRUE(b.consistent);
  EXPECT_TRUE(b.transfer_least_order <= b.order);
  EXPECT_EQ(b.transfer_least_order.at(q(0)), 1);
}

TEST(Decouple, WorkedExample) {
  auto rep = decouple(worked_example());
  EXPECT_EQ(rep.input_decoupling.support(), PointSet::of_points({q(1)}));
  EXPECT_EQ(rep.decoupling, PointSet::of_points({q(1)}));
  EXPECT_EQ(transfer_function(rep.reduced), (RatMat{{r(c(1), z)}}));
  EXPECT_EQ(amd_order(rep.reduced).at(q(0)), 1);
  EXPECT_EQ(amd_order(rep.reduced).total(), 1);
  EXPECT_TRUE(is_irreducible(rep.reduced));
  EXPECT_TRUE(rep.spectrum_identity);
  EXPECT_TRUE(least_order_check(rep.reduced).is_least);
}

TEST(Decouple, IrreducibleHasEmptySets) {
  auto rep = decouple(Amd::rmf(P({{c(1)}}), P({{z}})));
  EXPECT_TRUE(rep.input_decoupling.empty());
  EXPECT_TRUE(rep.output_decoupling.empty());
  EXPECT_TRUE(rep.io_decoupling.empty());
  EXPECT_TRUE(rep.decoupling.empty());
}

TEST(Decouple, ConstructAndRecover) {
  Rng rng(25);
  for (int t = 0; t < 6; ++t) {
    Amd H0;
    PolyMat QL, QR;
    // the planted factors must be the whole story: [A0 QR, B0] and [QL A0; C0] stay coprime
    do {
      H0 = testsupport::irreducible(rng, [](Rng &g) { return testsupport::random_state_space(g, 2, 1, 1); });
      long a = rng.integer(-3, 3), b = rng.integer(-3, 3);
      QL = P({{z - Poly(q(a)), c(0)}, {c(1), c(1)}});
      QR = P({{c(1), c(0)}, {c(0), z - Poly(q(b))}});
    } while (!are_left_coprime(H0.A * QR, H0.B).coprime ||
             !are_right_coprime(QL * H0.A, H0.C).coprime);
    Amd H(QL * H0.A * QR, QL * H0.B, H0.C * QR, H0.D);
    auto rep = decouple(H);
    EXPECT_EQ(rep.input_decoupling, Divisor::of_poly(det(QL)));
    EXPECT_TRUE(PointSet::roots_of(det(QR)).subset_of(rep.output_decoupling.support()));
    EXPECT_EQ(rep.decoupling, PointSet::roots_of(det(QL) * det(QR)));
    EXPECT_EQ(rep.QL * rep.reduced.A * rep.QR, H.A);
    EXPECT_TRUE(is_irreducible(rep.reduced));
    EXPECT_EQ(transfer_function(rep.reduced), transfer_function(H));
    EXPECT_TRUE(rep.spectrum_identity);
    auto again = decouple(rep.reduced);
    EXPECT_TRUE(again.decoupling.empty());
  }
}

TEST(CanonicalForm, RandomIrreducible) {
  Rng rng(26);
  for (int t = 0; t < 6; ++t) {
    Amd H = testsupport::irreducible(rng, [](Rng &g) { return testsupport::random_pmd(g, 2, 2, 1); });
    auto chk = canonical_form_check(H);
    EXPECT_TRUE(chk.matches);
  }
}
