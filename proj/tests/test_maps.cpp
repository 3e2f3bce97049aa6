/*
   Copyright 2026 The qtheight Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <gtest/gtest.h>

#include "qth/qth.hpp"
#include "test_util.hpp"

namespace qth {
namespace {

FFElem T() { return FFElem::t(); }
ProjPoint pt(const char* s) { return parse_point(s); }

HomogPair lattes() { return parse_map("(z^2-t)^2/(4*z*(z-1)*(z-t))"); }

TEST(Normalize, AlreadyNormalizedPairIsUnchanged) {
  // (z^2, t zw + w^2)
  HomogPair F({FFElem(0), FFElem(0), FFElem(1)}, {FFElem(1), T(), FFElem(0)});
  EXPECT_TRUE(is_normalized_at(F, Place::t()));
  HomogPair G = normalize_at(F, Place::t());
  EXPECT_EQ(G.P, F.P);
  EXPECT_EQ(G.Q, F.Q);
}

TEST(Normalize, CommonPowerOfTIsRemoved) {
  HomogPair F({FFElem(0), FFElem(0), T()}, {T(), FFElem(0), FFElem(0)});
  HomogPair G = normalize_at(F, Place::t());
  EXPECT_EQ(G.P[2], FFElem(1));
  EXPECT_EQ(G.Q[0], FFElem(1));
  EXPECT_EQ(min_coeff_valuation(G, Place::t()), 0);
}

TEST(OrderFunction, Examples) {
  EXPECT_EQ(order_sigma(lattes(), pt("t"), Place::t()), 2);
  HomogPair ex1 = parse_map("(z^2-t^2)/z");
  EXPECT_EQ(order_sigma(ex1, pt("t"), Place::t()), 1);
  EXPECT_EQ(order_sigma(ex1, pt("t^3"), Place::t()), 2);
  EXPECT_EQ(order_sigma(ex1, pt("1/t"), Place::t()), 0);
  HomogPair sq = parse_map("z^2");
  for (const char* a : {"0", "t", "1/t", "5", "inf", "(t-1)/t^3"}) EXPECT_EQ(order_sigma(sq, pt(a), Place::t()), 0) << a;
}

TEST(OrderFunction, ExampleOneRegimes) {
  // sigma = 0 for v(a) <= 0, v(a) on [0, 2] and 2 beyond
  HomogPair F = parse_map("(z^2-t^2)/z");
  for (int v = -2; v <= 5; ++v) {
    FFElem a = FFElem(3);
    for (int i = 0; i < std::abs(v); ++i) a = v > 0 ? a * T() : a / T();
    long want = v <= 0 ? 0 : std::min(v, 2);
    EXPECT_EQ(order_sigma(F, ProjPoint(a), Place::t()), want) << v;
  }
}

TEST(Resultant, HandSylvesterValues) {
  EXPECT_EQ(resultant(parse_map("z^2")), FFElem(1));
  HomogPair F({FFElem(0), FFElem(-1), FFElem(1)}, {T() * T() * T(), FFElem(0), FFElem(0)});  // (z(z-w), t^3 w^2)
  FFElem r = resultant(F);
  EXPECT_TRUE(r == T().pow(6) || r == -T().pow(6)) << r.str();
  // Res(P, zw) = +-P(0, 1) P(1, 0) = -+t^2
  EXPECT_EQ(val(resultant(parse_map("(z^2-t^2)/z")), Place::t()), 2);
}

TEST(Iterate, PointOrbits) {
  std::vector<ProjPoint> o = iterate_point(parse_map("z^2"), pt("t"), 3);
  ASSERT_EQ(o.size(), 4u);
  EXPECT_EQ(o[3].affine(), T().pow(8));
  std::vector<ProjPoint> o2 = iterate_point(parse_map("((z+1)*(z-t))/(z+t)"), pt("0"), 2);
  EXPECT_EQ(o2[1].affine(), FFElem(-1));
  EXPECT_TRUE(o2[2].affine().is_zero());
  std::vector<ProjPoint> o3 = iterate_point(lattes(), pt("t"), 2);
  EXPECT_TRUE(o3[1].is_infinity());
  EXPECT_TRUE(o3[2].is_infinity());
}

TEST(Iterate, MapIterates) {
  HomogPair F2 = iterate_map(parse_map("z^2"), 2);
  EXPECT_EQ(map_to_string(F2), "(z^4)");
  HomogPair F = parse_map("z*(z-1)/t^3");
  EXPECT_EQ(map_to_string(iterate_map(F, 1)), map_to_string(F));
  EXPECT_EQ(iterate_map(F, 2).d, 4);
}

TEST(Iterate, OrderOfIterateIdentity) {
  // sigma(F^2, a) = 2 sigma(F, a) + sigma(F, f(a)) for normalized F
  HomogPair F = normalize_at(parse_map("z*(z-1)/t^3"), Place::t());
  HomogPair F2 = iterate_map(F, 2);
  for (const char* as : {"1", "t", "1+t^2", "t^2", "1/t", "2"}) {
    ProjPoint a = pt(as);
    long lhs = order_sigma(F2, a, Place::t());
    long rhs = 2 * order_sigma(F, a, Place::t()) + order_sigma(F, apply_map(F, a), Place::t());
    EXPECT_EQ(lhs, rhs) << as;
  }
}

TEST(Conjugation, ScalingGivesExampleOne) {
  auto [G, rec] = conjugate(parse_map("(z^2-1)/z"), parse_mobius("t*z"));
  EXPECT_EQ(map_to_string(normalize_at(G, Place::t())), map_to_string(parse_map("(z^2-t^2)/z")));
}

TEST(Conjugation, IdentityAndInversion) {
  HomogPair F = parse_map("((z+1)*(z-t))/(z+t)");
  auto [G, rec] = conjugate(F, parse_mobius("z"));
  EXPECT_TRUE(rec.steps.empty());
  EXPECT_EQ(map_to_string(G), map_to_string(F));
  auto [S, r2] = conjugate(parse_map("z^2"), parse_mobius("1/z"));
  EXPECT_EQ(map_to_string(normalize_at(S, Place::t())), "(z^2)");
  ASSERT_EQ(r2.steps.size(), 1u);
  EXPECT_EQ(r2.steps[0].kind, ConjugationStep::Kind::Invert);
  PullbackData pb = pullback(r2, pt("t"), Place::t());
  EXPECT_EQ(pb.eta_x.affine(), T().inverse());
  EXPECT_EQ(pb.correction, Rational(-1));
}

TEST(TypeII, OrderOnDisks) {
  FactoredMap e1 = factor_map(parse_map("(z^2-t^2)/z"), Place::t());
  EXPECT_EQ(sigma_on_typeII(e1, TypeII::disk(FFElem(0), Rational(1))), Rational(1));
  FactoredMap e2 = factor_map(parse_map("z*(z-t)/t^3"), Place::t());
  EXPECT_EQ(sigma_on_typeII(e2, TypeII::disk(FFElem(0), Rational(1))), Rational(2));
  EXPECT_EQ(sigma_on_typeII(e2, TypeII::gauss()), Rational(0));
  // the zeros of the Lattes map involve sqrt(t), so it has no factored form
  EXPECT_THROW(factor_map(lattes(), Place::t()), PreconditionError);
}

TEST(OrderFunction, BoundedByResultantOnRandomInputs) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    HomogPair F = testing::random_quadratic_map(rng);
    long vr = val(resultant(F), Place::t());
    ProjPoint a(testing::random_ffelem(rng, 3, 4));
    long s = order_sigma(F, a, Place::t());
    EXPECT_GE(s, 0);
    EXPECT_LE(s, vr);
  }
}

TEST(OrderFunction, IterateIdentityOnRandomInputs) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    HomogPair F = testing::random_quadratic_map(rng);
    HomogPair F2 = iterate_map(F, 2);
    ProjPoint a(testing::random_ffelem(rng, 2, 4));
    long lhs = order_sigma(F2, a, Place::t());
    long rhs = 2 * order_sigma(F, a, Place::t()) + order_sigma(F, apply_map(F, a), Place::t());
    EXPECT_EQ(lhs, rhs);
  }
}

}  // namespace
}  // namespace qth
