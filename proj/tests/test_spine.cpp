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

FactoredMap fm_of(const char* s) { return factor_map(parse_map(s), Place::t()); }

TEST(Spine, ExampleOneIsAnInterval) {
  FactoredMap fm = fm_of("(z^2-t^2)/z");
  SpineTree s = build_spine(fm);
  ASSERT_EQ(s.vertices.size(), 2u);
  EXPECT_TRUE(s.vertices[0].point.is_gauss());
  EXPECT_EQ(s.vertices[0].sigma, Rational(0));
  EXPECT_EQ(s.vertices[1].point.rho, Rational(2));
  EXPECT_TRUE(s.vertices[1].point.center.is_zero());
  EXPECT_EQ(s.vertices[1].sigma, Rational(2));
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(s.edges[0].slope, Rational(1));
}

TEST(Spine, ExampleTwoIsAY) {
  FactoredMap fm = fm_of("z*(z-t)/t^3");
  SpineTree s = build_spine(fm);
  ASSERT_EQ(s.vertices.size(), 4u);
  std::vector<std::string> pts;
  std::vector<Rational> sig;
  for (const auto& v : s.vertices) {
    pts.push_back(v.point.str());
    sig.push_back(v.sigma);
  }
  EXPECT_EQ(pts, (std::vector<std::string>{"zeta0", "D(0, 1)", "D(0, 2)", "D(t, 2)"}));
  EXPECT_EQ(sig, (std::vector<Rational>{0, 2, 3, 3}));
  EXPECT_EQ(s.edges.size(), 3u);
}

TEST(Spine, GoodReductionGivesGaussPointOnly) {
  SpineTree s = build_spine(fm_of("(z^2-1)/z"));
  ASSERT_EQ(s.vertices.size(), 1u);
  EXPECT_TRUE(s.vertices[0].point.is_gauss());
  EXPECT_TRUE(s.edges.empty());
}

TEST(Profile, ExampleOneCapsAtTwo) {
  SigmaProfile p = sigma_profile(fm_of("(z^2-t^2)/z"), TypeII::gauss(), TypeII::disk(FFElem(0), Rational(3)));
  ASSERT_EQ(p.pieces.size(), 2u);
  EXPECT_EQ(p.pieces[0].slope(), Rational(1));
  EXPECT_EQ(p.pieces[0].s1, Rational(2));
  EXPECT_EQ(p.pieces[1].slope(), Rational(0));
  EXPECT_EQ(p.pieces[1].sigma1, Rational(2));
}

TEST(Profile, ExampleTwoSlopes) {
  SigmaProfile p = sigma_profile(fm_of("z*(z-t)/t^3"), TypeII::gauss(), TypeII::disk(FFElem(0), Rational(3)));
  std::vector<Rational> slopes;
  for (const auto& q : p.pieces) slopes.push_back(q.slope());
  EXPECT_EQ(slopes, (std::vector<Rational>{2, 1, 0}));
  EXPECT_EQ(p.pieces[0].s1, Rational(1));
  EXPECT_EQ(p.pieces[1].s1, Rational(2));
}

TEST(Profile, MatchesPointEvaluation) {
  // sigma(F, a) = min(v(a) + v(a - t), 3) for the second example
  HomogPair F = parse_map("z*(z-t)/t^3");
  FactoredMap fm = factor_map(F, Place::t());
  SigmaProfile p = sigma_profile(fm, TypeII::gauss(), TypeII::disk(FFElem(0), Rational(4)), 9);
  for (const auto& [s, sigma] : p.samples) {
    if (s.get_den() != 1) continue;
    FFElem a = FFElem(5) * FFElem::t().pow(s.get_num().get_si());
    long va = s.get_num().get_si();
    long direct = std::min(va + std::min(va, 1L), 3L);
    EXPECT_EQ(sigma, Rational(direct)) << to_string(s);
    EXPECT_EQ(order_sigma(F, ProjPoint(a), Place::t()), direct);
  }
}

TEST(Profile, GoodReductionIsFlat) {
  SigmaProfile p = sigma_profile(fm_of("z^2-1"), TypeII::gauss(), TypeII::disk(FFElem(1), Rational(5)));
  for (const auto& q : p.pieces) {
    EXPECT_EQ(q.sigma0, Rational(0));
    EXPECT_EQ(q.sigma1, Rational(0));
  }
}

TEST(Profile, MonotoneAwayFromGaussPointOnRandomMaps) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 40; ++i) {
    std::uniform_int_distribution<long> c(-3, 3);
    std::uniform_int_distribution<int> e(0, 3);
    // z (z - r1 t^k) / (u t^m) with zeros and poles in Q(t)
    auto nonzero = [&]() {
      long v = c(rng);
      return v == 0 ? 1L : v;
    };
    FFElem r1 = FFElem(nonzero()) * FFElem::t().pow(e(rng));
    FFElem u = FFElem(nonzero()) * FFElem::t().pow(e(rng));
    HomogPair F({FFElem(0), -r1, FFElem(1)}, {u, FFElem(0), FFElem(0)});
    FactoredMap fm = factor_map(F, Place::t());
    FFElem center = FFElem(c(rng)) * FFElem::t().pow(e(rng));
    SigmaProfile p = sigma_profile(fm, TypeII::gauss(), TypeII::disk(center, Rational(5)));
    for (const auto& q : p.pieces) EXPECT_GE(q.sigma1, q.sigma0);
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(GaussPreimage, LattesDiskReducesToDegreeTwo) {
  GaussPreimageResult r = gauss_preimage_verify(parse_map("(z^2-t)^2/(4*z*(z-1)*(z-t))"), TypeII::disk(FFElem(0), Rational(1)), Place::t());
  EXPECT_TRUE(r.maps_to_gauss);
  EXPECT_GE(r.reduction_degree, 1);
}

TEST(GaussPreimage, ExampleTwoInnerDisk) {
  GaussPreimageResult r = gauss_preimage_verify(parse_map("z*(z-t)/t^3"), TypeII::disk(FFElem(0), Rational(2)), Place::t());
  EXPECT_TRUE(r.maps_to_gauss);
  EXPECT_EQ(r.reduction_degree, 1);
}

TEST(GaussPreimage, SquaringRefutes) {
  GaussPreimageResult r = gauss_preimage_verify(parse_map("z^2"), TypeII::disk(FFElem(0), Rational(1)), Place::t());
  EXPECT_FALSE(r.maps_to_gauss);
  EXPECT_FALSE(r.refutation.empty());
}

}  // namespace
}  // namespace qth
