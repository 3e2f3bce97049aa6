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

HomogPair all_reals() { return parse_map("((z+1)*(z-t))/(z+t)"); }
ProjPoint pt(const char* s) { return parse_point(s); }

TEST(EtaEnclosure, GoodReductionIsZero) {
  EtaEnclosure e = eta_enclosure(parse_map("z^2"), pt("t+2"), Place::t(), 6);
  EXPECT_EQ(e.eta.lo, Rational(0));
  EXPECT_EQ(e.eta.hi, Rational(0));
}

TEST(EtaEnclosure, LattesDepthThree) {
  HomogPair F = lattes_map();
  long vres = val(resultant(F), Place::t());
  EtaEnclosure e = eta_enclosure(F, pt("t"), Place::t(), 3);
  EXPECT_EQ(e.digits, (std::vector<long>{2, 0, 0}));
  EXPECT_EQ(e.eta.lo, Rational(1, 2));
  EXPECT_LE(e.eta.hi, Rational(1, 2) + Rational(vres) / Rational(64 * 3));
}

TEST(EtaEnclosure, AllRealsAtZeroContainsTwoThirds) {
  EtaEnclosure e = eta_enclosure(all_reals(), pt("0"), Place::t(), 4);
  EXPECT_EQ(e.digits, (std::vector<long>{1, 0, 1, 0}));
  EXPECT_TRUE(e.eta.contains(Rational(2, 3)));
}

TEST(EtaEnclosure, DeeperEnclosuresNest) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    HomogPair F = testing::random_quadratic_map(rng);
    ProjPoint a(testing::random_ffelem(rng, 2, 3));
    Enclosure prev = eta_enclosure(F, a, Place::t(), 1).eta;
    for (int N = 2; N <= 5; ++N) {
      Enclosure e = eta_enclosure(F, a, Place::t(), N).eta;
      EXPECT_TRUE(prev.contains(e.lo) && prev.contains(e.hi)) << map_to_string(F) << " at " << a.str() << ", depth " << N;
      prev = e;
    }
  }
}

TEST(EtaEnclosure, CertifiedValuesLieInDepthTwenty) {
  for (const char* a : {"0", "-1", "-t"}) {
    LocalHeightResult h = local_height(all_reals(), pt(a), Place::t());
    ASSERT_TRUE(h.exact);
    EXPECT_TRUE(eta_enclosure(all_reals(), pt(a), Place::t(), 20).eta.contains(h.certificate.eta)) << a;
  }
  LocalHeightResult h = local_height(lattes_map(), pt("t"), Place::t());
  EXPECT_TRUE(eta_enclosure(lattes_map(), pt("t"), Place::t(), 20).eta.contains(h.certificate.eta));
}

TEST(LocalHeight, ZeroTailResidueOrbitReverified) {
  // the reduction of f at the Gauss point is z -> z + 1, so the residues of
  // the orbit of 1 are 1, 2, 3, ... and never reach the bad direction 0
  HomogPair F = all_reals();
  ProjPoint x = pt("1");
  for (long n = 0; n < 5; ++n) {
    EXPECT_EQ(residue(x.affine(), Place::t()).rational, Rational(1 + n));
    EXPECT_EQ(order_sigma(F, x, Place::t()), 0);
    x = apply_map(F, x);
  }
}

TEST(LocalHeight, GoodReductionIsMinusMinZeroV) {
  HomogPair F = parse_map("z^2+1");
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    FFElem a = testing::random_ffelem(rng, 3, 4);
    LocalHeightResult r = local_height(F, ProjPoint(a), Place::t());
    ASSERT_TRUE(r.exact);
    ExtInt v = valuation(a, Place::t());
    long m = v.is_inf() ? 0 : std::min(0L, v.value());
    EXPECT_EQ(r.value, Rational(-m)) << a.str();
  }
}

TEST(LocalHeight, LattesAtT) {
  LocalHeightResult r = local_height(lattes_map(), pt("t"), Place::t());
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.value, Rational(-1, 2));
  EXPECT_EQ(r.certificate.kind, Certificate::Kind::ExactPreperiodic);
  EXPECT_EQ(r.certificate.preperiod, 1);
  EXPECT_EQ(r.certificate.period, 1);
}

TEST(LocalHeight, AllRealsExactValues) {
  struct Case {
    const char* a;
    Rational value;
  };
  for (const Case& c : {Case{"0", Rational(-2, 3)}, Case{"-1", Rational(-1, 3)}, Case{"-t", Rational(-1, 2)},
                        Case{"t/(1-2*t)", Rational(-1)}}) {
    LocalHeightResult r = local_height(all_reals(), pt(c.a), Place::t());
    ASSERT_TRUE(r.exact) << c.a;
    EXPECT_EQ(r.value, c.value) << c.a;
  }
  LocalHeightResult r0 = local_height(all_reals(), pt("0"), Place::t());
  EXPECT_EQ(r0.certificate.preperiod, 0);
  EXPECT_EQ(r0.certificate.period, 2);
}

TEST(LocalHeight, AllRealsAtOneIsZeroTail) {
  LocalHeightResult r = local_height(all_reals(), pt("1"), Place::t());
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.value, Rational(0));
  EXPECT_EQ(r.certificate.kind, Certificate::Kind::ZeroTail);
  EXPECT_EQ(r.certificate.reason, "affine-residue-escape");
}

TEST(LocalHeight, EnclosureContainsExactValue) {
  // a short orbit scan finds no repetition, so only an enclosure is reported
  HeightOptions opt;
  opt.max_iter = 1;
  LocalHeightResult r = local_height(all_reals(), pt("0"), Place::t(), opt);
  ASSERT_FALSE(r.exact);
  EXPECT_EQ(r.certificate.kind, Certificate::Kind::EnclosureOnly);
  EXPECT_TRUE(r.enclosure.contains(Rational(-2, 3)));
  long vres = val(resultant(all_reals()), Place::t());
  long N = static_cast<long>(r.digits.size());
  EXPECT_EQ(r.enclosure.width(), Rational(vres) / Rational(1L << N));
}

TEST(Digits, PeriodicSums) {
  EXPECT_EQ(rational_from_periodic_digits(std::vector<long>{1, 0}, 0, 2, 2), Rational(2, 3));
  EXPECT_EQ(rational_from_periodic_digits(std::vector<long>{0}, 0, 1, 2), Rational(0));
  EXPECT_EQ(rational_from_periodic_digits(std::vector<long>{2, 0}, 1, 1, 4), Rational(1, 2));
}

TEST(FunctionalEquation, ResidualContainsZero) {
  EXPECT_TRUE(functional_equation_check(parse_map("z^2"), pt("1/t"), Place::t()).contains(Rational(0)));
  EXPECT_TRUE(functional_equation_check(all_reals(), pt("0"), Place::t()).contains(Rational(0)));
  EXPECT_TRUE(functional_equation_check(all_reals(), pt("-1"), Place::t()).contains(Rational(0)));
}

TEST(FunctionalEquation, PoleImageIsAnError) {
  LocalHeightResult r = local_height(lattes_map(), pt("1"), Place::t());
  EXPECT_EQ(r.value, Rational(0));
  EXPECT_THROW(functional_equation_check(lattes_map(), pt("1"), Place::t()), PreconditionError);
}

TEST(ScalingShift, Formula) {
  HomogPair F2 = parse_map("z^2"), F4 = parse_map("z^4");
  EXPECT_EQ(scaling_shift(F2, FFElem::t(), Place::t()), Rational(-1));
  EXPECT_EQ(scaling_shift(F2, FFElem(1), Place::t()), Rational(0));
  EXPECT_EQ(scaling_shift(F4, FFElem::t().pow(3), Place::t()), Rational(-1));
}

TEST(ScalingShift, RescaledPresentationShiftsHeight) {
  HomogPair F = all_reals();
  for (const char* s : {"t", "t^3", "1/t", "t+1", "2*t^2/(t-1)"}) {
    FFElem sc = parse_ffelem(s);
    LocalHeightResult a = local_height(F, pt("0"), Place::t());
    LocalHeightResult b = local_height(scale_pair(F, sc), pt("0"), Place::t());
    EXPECT_EQ(b.value - a.value, scaling_shift(F, sc, Place::t())) << s;
  }
}

TEST(Conjugation, PullbackFormulasOnCertifiedPoints) {
  HomogPair F = all_reals();
  for (const char* m : {"t*z", "z+t", "1/z", "(2*z+1)/(z-3)", "t^2*z+1", "(z-t)/(t*z+1)"}) {
    Mobius mu = parse_mobius(m);
    auto [G, rec] = conjugate(F, mu);
    for (const char* as : {"0", "-1", "-t"}) {
      ProjPoint a = pt(as), x = mu.apply(a);
      if (x.is_infinity()) continue;
      LocalHeightResult hf = local_height(F, a, Place::t());
      LocalHeightResult hg = local_height(G, x, Place::t());
      PullbackData pb = pullback(rec, x, Place::t());
      ASSERT_TRUE(hf.exact);
      EXPECT_TRUE(hg.enclosure.contains(hf.value + pb.correction)) << m << " at " << as;
      if (hg.exact) {
        EXPECT_EQ(hg.value, hf.value + pb.correction) << m << " at " << as;
      }
    }
  }
}

TEST(GlobalHeight, SquaringMap) {
  GlobalHeightResult g1 = global_height(parse_map("z^2"), pt("t"));
  ASSERT_TRUE(g1.exact);
  EXPECT_EQ(g1.value, Rational(1));
  GlobalHeightResult g2 = global_height(parse_map("z^2"), pt("(t-1)/t"));
  ASSERT_TRUE(g2.exact);
  EXPECT_EQ(g2.value, Rational(1));
  GlobalHeightResult g3 = global_height(parse_map("z^2"), pt("5"));
  ASSERT_TRUE(g3.exact);
  EXPECT_EQ(g3.value, Rational(0));
}

TEST(GlobalHeight, SquaringMapMatchesWeilHeight) {
  // for z^2 the canonical height is the Weil height max(deg num, deg den)
  std::mt19937_64 rng(41);
  for (int i = 0; i < 15; ++i) {
    FFElem a = testing::random_ffelem(rng, 3, 4);
    GlobalHeightResult g = global_height(parse_map("z^2"), ProjPoint(a));
    ASSERT_TRUE(g.exact) << a.str();
    EXPECT_EQ(g.value, Rational(std::max(a.num().degree(), a.den().degree()))) << a.str();
  }
}

}  // namespace
}  // namespace qth
