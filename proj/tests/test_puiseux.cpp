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

namespace qth {
namespace {

using PA = PuiseuxApprox;

PA mono(long c, Rational e, Rational cut = Rational(12)) { return PA::monomial(BigComplex(c), e, cut); }

bool close(const BigComplex& a, const BigComplex& b, const char* eps = "1e-30") { return (a - b).abs() < BigFloat(eps); }

// coefficient list {(exponent, value)} must match x up to its cutoff
void expect_series(const PA& x, const std::vector<std::pair<Rational, Rational>>& want) {
  std::size_t k = 0;
  for (const auto& [e, c] : want) {
    if (e >= x.cutoff()) break;
    EXPECT_TRUE(close(x.coefficient(e), BigComplex(c))) << "t^" << to_string(e) << " in " << x.str(10);
    ++k;
  }
  std::size_t nonzero = 0;
  for (const auto& t : x.terms())
    if (t.e < x.cutoff()) ++nonzero;
  EXPECT_EQ(nonzero, k) << x.str(10);
}

TEST(Puiseux, HalfPowersMultiply) {
  PA h = mono(1, Rational(1, 2));
  expect_series(p_mul(h, h), {{Rational(1), Rational(1)}});
}

TEST(Puiseux, DivisionByOne) {
  PA x = p_add(PA::constant(BigComplex(1), 8), mono(1, Rational(1), 8));
  expect_series(p_div(x, PA::constant(BigComplex(1), 8)), {{0, 1}, {1, 1}});
}

TEST(Puiseux, GeometricSeries) {
  PA x = p_sub(PA::constant(BigComplex(1), 3), mono(1, Rational(1), 3));
  PA y = p_inv(x);
  EXPECT_EQ(y.cutoff(), Rational(3));
  expect_series(y, {{0, 1}, {1, 1}, {2, 1}});
}

TEST(Puiseux, SquareRoots) {
  expect_series(p_sqrt(mono(1, Rational(2))), {{1, 1}});
  expect_series(p_sqrt(mono(1, Rational(1))), {{Rational(1, 2), 1}});
  PA x = p_add(PA::constant(BigComplex(1), 3), mono(1, Rational(1), 3));
  expect_series(p_sqrt(x), {{0, 1}, {1, Rational(1, 2)}, {2, Rational(-1, 8)}});
}

TEST(Puiseux, SquareRootSquaresBack) {
  PA x = p_add(p_add(mono(2, Rational(2, 3), 10), mono(-3, Rational(1), 10)), mono(5, Rational(7, 3), 10));
  PA r = p_sqrt(x);
  PA back = p_mul(r, r);
  PA diff = p_sub(back, x);
  EXPECT_TRUE(diff.is_numerically_zero()) << diff.str(10);
}

TEST(Puiseux, Valuations) {
  PA x = p_add(mono(3, Rational(1, 2)), mono(1, Rational(1)));
  EXPECT_EQ(x.pval(), ExtRational(Rational(1, 2)));
  EXPECT_TRUE(PA::zero(Rational(5)).pval().is_inf());
  PA tiny({{Rational(1), BigComplex(BigFloat("1e-40"))}}, Rational(5), 1e-20);
  EXPECT_TRUE(tiny.pval().is_inf());
}

TEST(Puiseux, ParseRoundTrip) {
  PA x = p_add(mono(3, Rational(1, 2)), mono(-1, Rational(5, 3)));
  PA y = parse_puiseux(x.str(40));
  EXPECT_TRUE(p_sub(x, y).is_numerically_zero());
  EXPECT_EQ(y.cutoff(), x.cutoff());
}

TEST(Puiseux, RamificationBoundIsEnforced) {
  EXPECT_NO_THROW(PA({{Rational(1, 7), BigComplex(1)}}, Rational(3), 1e-40, 7));
  EXPECT_THROW(PA({{Rational(1, 7), BigComplex(1)}}, Rational(3), 1e-40, 5), ResourceCapError);
}

TEST(Puiseux, LocalSeriesOfRationalFunction) {
  // 1/(1-t) at the place t, and t/(t-1) at infinity in s = 1/t: 1/(1-s)
  PA x = to_local_series(parse_ffelem("1/(1-t)"), Place::t(), Rational(4));
  expect_series(x, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  PA y = to_local_series(parse_ffelem("t/(t-1)"), Place::infinity(), Rational(3));
  expect_series(y, {{0, 1}, {1, 1}, {2, 1}});
  PA z = to_local_series(parse_ffelem("t^2"), Place::at(Rational(1)), Rational(5));
  expect_series(z, {{0, 1}, {1, 2}, {2, 1}});
}

TEST(Newton, SquareRootOfT) {
  HomogPair F = parse_map("z^2");
  PA root = newton_lift(F, mono(1, Rational(1), 24), mono(1, Rational(1, 2), 24), Place::t());
  expect_series(root, {{Rational(1, 2), 1}});
}

TEST(Newton, ZeroOfAllRealsMap) {
  HomogPair F = parse_map("((z+1)*(z-t))/(z+t)");
  PA root = newton_lift(F, PA::zero(Rational(24)), mono(1, Rational(1), 24), Place::t());
  expect_series(root, {{1, 1}});
}

TEST(Newton, WrongBranchFails) {
  HomogPair F = parse_map("z^2-t");
  EXPECT_THROW(newton_lift(F, PA::zero(Rational(24)), PA::constant(BigComplex(1), 24), Place::t()), NewtonError);
}

TEST(Newton, LiftedPreimageMapsToTarget) {
  HomogPair F = parse_map("(z^2+t*z+1)/(z-2)");
  PA target = p_add(PA::constant(BigComplex(3), 16), mono(1, Rational(1, 2), 16));
  // seed: a root of z^2 + 1 = 3(z - 2), i.e. z^2 - 3z + 7, evaluated numerically
  BigComplex disc = (BigComplex(9) - BigComplex(28)).sqrt();
  BigComplex z0 = (BigComplex(3) + disc) / BigComplex(2);
  PA x = newton_lift(F, target, PA::constant(z0, 16), Place::t());
  std::vector<PA> P, Q;
  for (int i = 0; i <= F.d; ++i) {
    P.push_back(to_local_series(F.P[static_cast<std::size_t>(i)], Place::t(), Rational(16)));
    Q.push_back(to_local_series(F.Q[static_cast<std::size_t>(i)], Place::t(), Rational(16)));
  }
  PA image = p_div(p_poly_eval(P, x), p_poly_eval(Q, x));
  EXPECT_TRUE(p_sub(image, target).with_cutoff(x.cutoff()).is_numerically_zero()) << image.str(8);
}

}  // namespace
}  // namespace qth
