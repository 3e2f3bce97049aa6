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
FFElem P(const char* s) { return parse_ffelem(s); }

TEST(Parse, CanonicalFormHasMonicDenominator) {
  FFElem x = P("t^2/(1-t)");
  EXPECT_EQ(x, FFElem(QPoly(std::vector<Rational>{0, 0, -1}), QPoly(std::vector<Rational>{-1, 1})));
  EXPECT_EQ(x.den().lc(), Rational(1));
}

TEST(Parse, ProductExpands) { EXPECT_EQ(P("(t+1)*(t-1)"), T() * T() - FFElem(1)); }

TEST(Parse, ZeroOverConstant) { EXPECT_TRUE(P("0/5").is_zero()); }

TEST(Parse, RationalCoefficientsAndPowers) {
  EXPECT_EQ(P("(1/2)*t^3 - t"), FFElem(Rational(1, 2)) * T() * T() * T() - T());
  EXPECT_EQ(P("-t"), -T());
}

TEST(Parse, MalformedInputReportsPosition) {
  EXPECT_THROW(P("(t+1"), ParseError);
  EXPECT_THROW(P("t+*2"), ParseError);
  EXPECT_THROW(P("1/0"), ParseError);
  try {
    P("t + $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Valuation, Examples) {
  EXPECT_EQ(val(P("t^2/(1-t)"), Place::t()), 2);
  EXPECT_EQ(val(T(), Place::infinity()), -1);
  EXPECT_TRUE(valuation(FFElem(), Place::t()).is_inf());
  EXPECT_TRUE(valuation(FFElem(), Place::infinity()).is_inf());
  EXPECT_EQ(val(P("(t^2+1)^3/t"), Place::finite(P("t^2+1").num())), 3);
}

TEST(Residue, Examples) {
  ResidueValue r = residue(P("(1+t)/(1-t)"), Place::t());
  EXPECT_FALSE(r.at_infinity);
  EXPECT_EQ(r.rational, Rational(1));
  EXPECT_TRUE(residue(P("1/t"), Place::t()).at_infinity);
  EXPECT_EQ(residue(P("t+3"), Place::at(Rational(1))).rational, Rational(4));
  // at infinity the residue of (2t+1)/(t-5) is the ratio of leading terms
  EXPECT_EQ(residue(P("(2*t+1)/(t-5)"), Place::infinity()).rational, Rational(2));
}

TEST(Residue, HigherDegreePlaceGivesClass) {
  Place p = Place::finite(P("t^2+1").num());
  ResidueValue r = residue(P("t^3"), p);  // t^3 = -t mod t^2+1
  EXPECT_FALSE(r.in_q);
  EXPECT_EQ(r.cls, P("-t").num());
}

TEST(ProductFormula, Examples) {
  EXPECT_EQ(product_formula_check(P("t*(t-1)")), 0);
  EXPECT_EQ(product_formula_check(P("t^2+1")), 0);
  EXPECT_EQ(product_formula_check(FFElem(7)), 0);
  EXPECT_TRUE(support_places(FFElem(7)).empty());
}

TEST(ProductFormula, RandomElementsSumToZero) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(product_formula_check(testing::nonzero_ffelem(rng)), 0);
}

TEST(Valuation, MultiplicativeOnRandomElements) {
  std::mt19937_64 rng(12);
  std::vector<Place> places{Place::t(), Place::at(Rational(1)), Place::at(Rational(-2)), Place::infinity()};
  for (int i = 0; i < 60; ++i) {
    FFElem x = testing::nonzero_ffelem(rng), y = testing::nonzero_ffelem(rng);
    for (const Place& p : places) {
      EXPECT_EQ(val(x * y, p), val(x, p) + val(y, p));
      ExtInt vs = valuation(x + y, p);
      if (!vs.is_inf()) {
        EXPECT_GE(vs.value(), std::min(val(x, p), val(y, p)));
      }
    }
  }
}

TEST(Place, RejectsReduciblePolynomials) {
  EXPECT_THROW(parse_place("t^2-1"), PreconditionError);
  EXPECT_NO_THROW(parse_place("t^2+1"));
  EXPECT_TRUE(parse_place("inf").is_infinity());
}

TEST(Factor, ProductReconstructsInput) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 30; ++i) {
    QPoly a = testing::random_qpoly(rng, 3), b = testing::random_qpoly(rng, 3);
    QPoly f = a * b * a;
    if (f.degree() < 1) continue;
    QPoly prod(std::vector<Rational>{f.lc()});
    for (const auto& q : factor_over_q(f)) {
      EXPECT_TRUE(is_irreducible_over_q(q.factor));
      prod = prod * q.factor.pow(static_cast<unsigned long>(q.multiplicity));
    }
    EXPECT_EQ(prod, f);
  }
}

TEST(Gcd, ModularPathAgreesWithEuclid) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 30; ++i) {
    QPoly c = testing::random_qpoly(rng, 3, 9);
    QPoly a = c * testing::random_qpoly(rng, 5, 9), b = c * testing::random_qpoly(rng, 5, 9);
    QPoly g1 = gcd(a, b), g2 = gcd<Rational>(a, b);
    EXPECT_EQ(g1.monic(), g2.monic());
  }
}

TEST(QtRoots, RootsOfProductsOfLinearFactors) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 20; ++i) {
    FFElem r1 = testing::random_ffelem(rng, 2, 4), r2 = testing::random_ffelem(rng, 2, 4);
    ZtPoly g = ZtPoly(std::vector<FFElem>{-r1, FFElem(1)}) * ZtPoly(std::vector<FFElem>{-r2, FFElem(1)}) *
               ZtPoly(std::vector<FFElem>{T() * T() + FFElem(1), FFElem(0), FFElem(1)});
    std::vector<QtRoot> roots = qt_roots(g);
    int found1 = 0, found2 = 0;
    for (const QtRoot& r : roots) {
      EXPECT_TRUE(eval_zt(g, r.value).is_zero());
      if (r.value == r1) found1 = r.multiplicity;
      if (r.value == r2) found2 = r.multiplicity;
    }
    EXPECT_GT(found1, 0);
    EXPECT_GT(found2, 0);
    int total = 0;
    for (const QtRoot& r : roots) total += r.multiplicity;
    EXPECT_EQ(total, 2);  // z^2 + t^2 + 1 has no root in Q(t)
  }
}

TEST(Rational, RatioIsCanonical) {
  EXPECT_EQ(to_string(ratio(-3, 6)), "-1/2");
  EXPECT_EQ(to_string(ratio(4, -2)), "-2");
  EXPECT_THROW(parse_rational("1/0"), Error);
}

}  // namespace
}  // namespace qth
