#include "support.hpp"

#include <gtest/gtest.h>

using namespace meromat;
using testsupport::Rng;

namespace {

Poly P(std::initializer_list<long> c) {
  std::vector<GaussRat> v;
  for (long x : c)
    v.emplace_back(x);
  return Poly(v);
}

const Poly z = Poly::z();

} // namespace

TEST(PolyGcd, Examples) {
  EXPECT_EQ(gcd(z * z - Poly(1), z - Poly(1)), z - Poly(1));
  Poly p = P({4, 0, 2});
  EXPECT_EQ(gcd(p, Poly()), p.monic());
  EXPECT_EQ(gcd(Poly(), Poly()), Poly());
  EXPECT_EQ(gcd(Poly(1), z.pow(5) + Poly(3)), Poly(1));
}

TEST(PolyDivmod, Examples) {
  auto [q1, r1] = divmod(z * z + Poly(1), z);
  EXPECT_EQ(q1, z);
  EXPECT_EQ(r1, Poly(1));
  auto [q2, r2] = divmod(z - Poly(1), z - Poly(1));
  EXPECT_EQ(q2, Poly(1));
  EXPECT_TRUE(r2.is_zero());
  auto [q3, r3] = divmod(Poly(3), z);
  EXPECT_TRUE(q3.is_zero());
  EXPECT_EQ(r3, Poly(3));
  EXPECT_THROW(divmod(z, Poly()), InputError);
}

TEST(RatFnReduce, Examples) {
  EXPECT_EQ(ratfn_reduce(z * z - Poly(1), z - Poly(1)), RatFn(z + Poly(1)));
  RatFn zero = ratfn_reduce(Poly(), z.pow(3));
  EXPECT_TRUE(zero.is_zero());
  EXPECT_TRUE(zero.den().is_one());
  RatFn h = ratfn_reduce(Poly(2) * z, Poly(4));
  EXPECT_TRUE(h.den().is_one());
  EXPECT_EQ(h.num(), Poly(GaussRat(mpq_class(1, 2))) * z);
  EXPECT_THROW(ratfn_reduce(z, Poly()), InputError);
}

TEST(PolyGcd, DividesBothAndContainsPlantedFactor) {
  Rng rng(11);
  const Poly factors[] = {z, z - Poly(1), z + Poly(2), z * z + Poly(1), P({-1, 0, 3})};
  for (int t = 0; t < 200; ++t) {
    Poly common(1);
    for (auto &f : factors)
      if (rng.coin(0.3))
        common *= f;
    Poly a = testsupport::random_poly(rng, 4, 4, true) * common;
    Poly b = testsupport::random_poly(rng, 4, 4, true) * common;
    if (a.degree() > 8 || b.degree() > 8)
      continue;
    Poly g = gcd(a, b);
    EXPECT_TRUE(divides(g, a));
    EXPECT_TRUE(divides(g, b));
    if (!a.is_zero() || !b.is_zero())
      EXPECT_TRUE(divides(common, g)) << a << " | " << b;
    for (auto &f : factors)
      if (divides(f, a) && divides(f, b) && !(a.is_zero() && b.is_zero()))
        EXPECT_TRUE(divides(f, g));
  }
}

TEST(PolyDivmod, RoundTrip) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    Poly p = testsupport::random_poly(rng, 8, 5, true);
    Poly d = testsupport::random_poly(rng, 4, 5, true);
    if (d.is_zero())
      continue;
    auto [q, r] = divmod(p, d);
    EXPECT_EQ(q * d + r, p);
    EXPECT_LT(r.degree(), d.degree());
  }
}

TEST(RatFn, ArithmeticAgreesWithEvaluation) {
  Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    Poly d1 = testsupport::random_poly(rng, 3);
    Poly d2 = testsupport::random_poly(rng, 3);
    if (d1.is_zero() || d2.is_zero())
      continue;
    RatFn f(testsupport::random_poly(rng, 3), d1), g(testsupport::random_poly(rng, 3), d2);
    RatFn sum = f + g, prod = f * g;
    std::optional<RatFn> inv;
    if (!f.is_zero())
      inv = f.inverse();
    for (int s = 0; s < 20; ++s) {
      GaussRat x(rng.rational(7, 5));
      if (d1.eval(x).is_zero() || d2.eval(x).is_zero())
        continue;
      GaussRat fx = f.eval(x), gx = g.eval(x);
      EXPECT_EQ(sum.eval(x), fx + gx);
      EXPECT_EQ(prod.eval(x), fx * gx);
      if (inv && !fx.is_zero())
        EXPECT_EQ(inv->eval(x), fx.inverse());
    }
    EXPECT_TRUE(sum.den().lead().is_one());
    EXPECT_TRUE(gcd(sum.num(), sum.den()).degree() <= 0);
  }
}

TEST(GaussRat, ComplexArithmetic) {
  GaussRat i = GaussRat::i();
  EXPECT_EQ(i * i, GaussRat(-1));
  GaussRat a(mpq_class(1, 2), mpq_class(3));
  EXPECT_EQ(a * a.inverse(), GaussRat(1));
  EXPECT_EQ((a / i) * i, a);
  // z^2 + 1 has exact roots +-i
  auto roots = exact_roots(z * z + Poly(1));
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_TRUE(std::find(roots.begin(), roots.end(), i) != roots.end());
  EXPECT_TRUE(std::find(roots.begin(), roots.end(), -i) != roots.end());
}

TEST(Poly, SquarefreeAndMultiplicity) {
  Poly p = (z - Poly(1)).pow(3) * (z + Poly(2)) * (z * z + Poly(1)).pow(2);
  auto sf = squarefree_decomposition(p);
  Poly rebuilt(1);
  for (auto &[f, k] : sf)
    rebuilt *= f.pow(static_cast<unsigned>(k));
  EXPECT_EQ(rebuilt, p.monic());
  EXPECT_EQ(multiplicity(p, GaussRat(1)), 3);
  EXPECT_EQ(multiplicity(p, GaussRat(-2)), 1);
  EXPECT_EQ(multiplicity(p, GaussRat::i()), 2);
  EXPECT_EQ(multiplicity(p, GaussRat(5)), 0);
  EXPECT_EQ(multiplicity(p, z * z + Poly(1)), 2);
  auto roots = numeric_roots(p);
  EXPECT_EQ(roots.size(), 8u);
}

TEST(Poly, TextRendering) {
  EXPECT_EQ((z * z - Poly(3) * z + Poly(1)).str(), "z^2 - 3*z + 1");
  EXPECT_EQ((-z).str(), "-z");
  EXPECT_EQ(Poly(GaussRat(mpq_class(-1, 2))).str(), "-1/2");
  EXPECT_EQ((Poly(GaussRat::i()) * z + Poly(1)).str(), "(i)*z + 1");
  EXPECT_EQ(Poly().str(), "0");
}
