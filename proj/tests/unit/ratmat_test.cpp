#include "support.hpp"

#include <gtest/gtest.h>

using namespace meromat;
using testsupport::Rng;

namespace {

const Poly z = Poly::z();
RatFn r(const Poly &n, const Poly &d = Poly(1)) { return RatFn(n, d); }
RatFn k(long v) { return RatFn(v); }
GaussRat q(long v) { return GaussRat(mpq_class(v)); }

void expect_valid_smith_mcmillan(const RatMat &M, const SmithMcMillanDecomposition &sm) {
  EXPECT_EQ(to_ratmat(sm.E) * sm.Sigma * to_ratmat(sm.F), M);
  EXPECT_TRUE(is_unimodular(sm.E));
  EXPECT_TRUE(is_unimodular(sm.F));
  ASSERT_EQ(sm.zero_factors.size(), sm.nrank);
  ASSERT_EQ(sm.pole_factors.size(), sm.nrank);
  for (std::size_t j = 0; j < sm.nrank; ++j) {
    EXPECT_TRUE(sm.zero_factors[j].lead().is_one());
    EXPECT_TRUE(sm.pole_factors[j].lead().is_one());
    EXPECT_EQ(gcd(sm.zero_factors[j], sm.pole_factors[j]), Poly(1));
    if (j + 1 < sm.nrank) {
      EXPECT_TRUE(divides(sm.zero_factors[j], sm.zero_factors[j + 1]));
      EXPECT_TRUE(divides(sm.pole_factors[j + 1], sm.pole_factors[j]));
    }
  }
}

} // namespace

TEST(SmithMcMillan, Examples) {
  auto a = smith_mcmillan(RatMat{{r(1, z)}});
  EXPECT_EQ(a.zero_factors[0], Poly(1));
  EXPECT_EQ(a.pole_factors[0], z);

  RatMat b{{r(1, z), k(0)}, {k(0), r(z)}};
  auto sb = smith_mcmillan(b);
  expect_valid_smith_mcmillan(b, sb);
  EXPECT_EQ(sb.Sigma(0, 0), r(1, z));
  EXPECT_EQ(sb.Sigma(1, 1), r(z));

  RatMat c{{r(1, z), r(1, z * z)}};
  auto sc = smith_mcmillan(c);
  expect_valid_smith_mcmillan(c, sc);
  EXPECT_EQ(sc.Sigma, (RatMat{{r(1, z * z), k(0)}}));
}

TEST(SmithMcMillan, RandomReconstructionAndChains) {
  Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    auto m = static_cast<std::size_t>(rng.integer(1, 3));
    auto n = static_cast<std::size_t>(rng.integer(1, 3));
    RatMat M = testsupport::random_ratmat(rng, m, n);
    expect_valid_smith_mcmillan(M, smith_mcmillan(M));
  }
}

TEST(ClassifyPoints, Examples) {
  auto a = classify_points(RatMat{{r(z), k(0)}, {k(0), r(1, z)}});
  EXPECT_TRUE(a.eip.contains(q(0)));
  EXPECT_TRUE(a.eig.empty());

  auto b = classify_points(RatMat{{r(z - 1)}});
  EXPECT_EQ(b.eig, PointSet::of_points({q(1)}));
  EXPECT_TRUE(b.poles.empty());

  auto c = classify_points(RatMat{{r(1, z - 2)}});
  EXPECT_EQ(c.poles.at(q(2)), 1);
  EXPECT_EQ(c.poles.total(), 1);
  EXPECT_TRUE(c.eig.empty());
}

TEST(ClassifyPoints, PartitionOfZeroSet) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 2, 2);
    auto sm = smith_mcmillan(M);
    auto cl = classify_points(M);
    EXPECT_TRUE(cl.eig.intersect(cl.eip).empty());
    EXPECT_EQ(cl.eig.unite(cl.eip), PointSet::roots_of(sm.zero_product()));
  }
}

TEST(Indices, Examples) {
  RatMat a{{r(1, z), k(0)}, {k(0), r(z)}};
  EXPECT_EQ(pole_zero_index(a, q(0)).values, (std::vector<long>{-1, 1}));
  EXPECT_EQ(zero_index(RatMat{{r((z - 1) * (z - 1))}}, q(1)).values, std::vector<long>{2});
  EXPECT_EQ(pole_index(RatMat{{r(1, z), r(1, z * z)}}, q(0)).values, std::vector<long>{2});
  // not a zero: order 0 is still reported
  EXPECT_EQ(zero_index(RatMat{{r(z)}}, q(3)).values, std::vector<long>{0});
}

TEST(Indices, MatchMinorOracleAndMonotone) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 2, 3);
    auto sm = smith_mcmillan(M);
    for (long a = -2; a <= 2; ++a) {
      auto tau = pole_zero_index(sm, q(a)).values;
      EXPECT_EQ(tau, testsupport::local_exponents(M, sm.nrank, q(a)));
      EXPECT_TRUE(std::is_sorted(tau.begin(), tau.end()));
    }
  }
}

TEST(Mfd, Examples) {
  auto a = right_coprime_mfd(RatMat{{r(1, z)}});
  EXPECT_EQ(a.N, (PolyMat{{Poly(1)}}));
  EXPECT_EQ(a.D, (PolyMat{{z}}));

  auto b = right_coprime_mfd(RatMat{{r(1, z), r(1, z * z)}});
  EXPECT_EQ(det(b.D).degree(), 2);
  EXPECT_EQ(least_order(RatMat{{r(1, z), r(1, z * z)}}).at(q(0)), 2);
}

TEST(Mfd, RandomRightAndLeft) {
  Rng rng(14);
  for (int t = 0; t < 15; ++t) {
    auto m = static_cast<std::size_t>(rng.integer(1, 3));
    auto n = static_cast<std::size_t>(rng.integer(1, 3));
    RatMat M = testsupport::random_ratmat(rng, m, n);
    auto sm = smith_mcmillan(M);
    auto R = right_coprime_mfd(M);
    auto L = left_coprime_mfd(M);
    EXPECT_EQ(R.value(), M);
    EXPECT_EQ(L.value(), M);
    EXPECT_TRUE(mfd_coprime(R));
    EXPECT_TRUE(mfd_coprime(L));
    // Smith forms of numerator and denominator
    auto sn = smith_form(R.N);
    std::vector<Poly> nf(sn.invariant_factors.begin(), sn.invariant_factors.end());
    EXPECT_EQ(nf, sm.zero_factors);
    auto sd = smith_form(R.D);
    std::size_t pad = n - sm.nrank;
    for (std::size_t j = 0; j < n; ++j) {
      Poly expect = j < pad ? Poly(1) : sm.pole_factors[sm.nrank - 1 - (j - pad)];
      EXPECT_EQ(sd.invariant_factors[j], expect);
    }
    // left and right denominators carry the same divisor
    EXPECT_EQ(Divisor::of_poly(det(R.D)), Divisor::of_poly(det(L.D)));
    EXPECT_EQ(Divisor::of_poly(det(R.D)), least_order(M));
  }
}

TEST(Mfd, UnitRelatorRecoversPlanted) {
  Rng rng(15);
  for (int t = 0; t < 10; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 2, 2);
    auto R = right_coprime_mfd(M);
    EXPECT_EQ(mfd_unit_relator(R, R), PolyMat::identity(2));
    PolyMat V = testsupport::random_unimodular(rng, 2);
    Mfd R2{R.N * V, R.D * V, Side::Right, true};
    EXPECT_EQ(mfd_unit_relator(R2, R), V);

    auto L = left_coprime_mfd(M);
    Mfd L2{V * L.N, V * L.D, Side::Left, true};
    EXPECT_EQ(mfd_unit_relator(L2, L), V);
  }
}

TEST(Mfd, UnitRelatorRejectsNonCoprime) {
  RatMat M{{r(1, z)}};
  auto R = right_coprime_mfd(M);
  Mfd bad{R.N * PolyMat{{z - 1}}, R.D * PolyMat{{z - 1}}, Side::Right, false};
  EXPECT_THROW(mfd_unit_relator(R, bad), NotCoprimeError);
  Mfd other = right_coprime_mfd(RatMat{{r(1, z - 1)}});
  EXPECT_THROW(mfd_unit_relator(R, other), InputError);
}

TEST(LeastOrder, Examples) {
  auto a = least_order(RatMat{{r(1, z)}});
  EXPECT_EQ(a.at(q(0)), 1);
  EXPECT_EQ(least_order_total(RatMat{{r(1, z)}}), 1);
  EXPECT_EQ(least_order_total(RatMat{{r(1, z), r(1, z * z)}}), 2);
  EXPECT_TRUE(least_order(RatMat{{r(z)}}).empty());
}

TEST(LeastOrder, UnimodularInvarianceAndDomination) {
  Rng rng(16);
  for (int t = 0; t < 10; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 2, 2);
    PolyMat U = testsupport::random_unimodular(rng, 2), V = testsupport::random_unimodular(rng, 2);
    Divisor nu = least_order(M);
    EXPECT_EQ(least_order(to_ratmat(U) * M * to_ratmat(V)), nu);

    auto R = right_coprime_mfd(M);
    PolyMat W{{z - Poly(q(t % 3)), Poly(1)}, {Poly(0), Poly(1)}};
    PolyMat DW = R.D * W;
    Divisor dw = Divisor::of_poly(det(DW));
    EXPECT_TRUE(nu <= dw);
    EXPECT_NE(nu, dw);
    EXPECT_EQ(to_ratmat(R.N * W) * inverse(DW), M);
  }
}

TEST(McMillanDegree, Examples) {
  EXPECT_EQ(mcmillan_degree(RatMat{{r(z)}}), 1);
  EXPECT_EQ(mcmillan_degree(RatMat{{r(1, z)}}), 1);
  EXPECT_EQ(mcmillan_degree(RatMat{{k(5)}}), 0);
  // z^2 + 1/(z-1): two poles at infinity, one finite
  EXPECT_EQ(mcmillan_degree(RatMat{{r(z * z) + r(1, z - 1)}}), 3);
}

TEST(RationalAlgebra, InverseAndDet) {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    RatMat M = testsupport::random_ratmat(rng, 3, 3, 2, 0.0);
    RatFn d = det(M);
    EXPECT_EQ(d, testsupport::laplace_det(M));
    if (d.is_zero())
      continue;
    EXPECT_EQ(M * inverse(M), RatMat::identity(3));
    EXPECT_EQ(rank(M), 3u);
  }
}
