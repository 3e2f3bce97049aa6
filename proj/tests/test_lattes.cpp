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

#include <random>

#include "qth/qth.hpp"
#include "test_util.hpp"

namespace qth {
namespace {

TEST(LattesMap, Shape) {
  HomogPair F = lattes_map();
  EXPECT_EQ(F.d, 4);
  EXPECT_TRUE(apply_map(F, ProjPoint::infinity()).is_infinity());
  EXPECT_EQ(val(resultant(F), Place::t()), 4);
}

TEST(TentStep, InteriorRadii) {
  TentStep a = tent_step(TentState::active(Rational(1, 3)));
  EXPECT_EQ(a.next, TentState::active(Rational(2, 3)));
  EXPECT_EQ(a.digit, Rational(2, 3));
  TentStep b = tent_step(TentState::active(Rational(2, 3)));
  EXPECT_EQ(b.next, TentState::active(Rational(2, 3)));
  EXPECT_EQ(b.digit, Rational(4, 3));
}

TEST(TentStep, BranchingRadii) {
  TentStep z = tent_step(TentState::active(Rational(0)), Rational(5));
  EXPECT_EQ(z.next, TentState::active(Rational(0)));
  EXPECT_EQ(z.digit, Rational(0));
  EXPECT_EQ(tent_step(TentState::active(Rational(0)), Rational(1)).next, TentState::below());
  EXPECT_EQ(tent_step(TentState::active(Rational(1, 2)), Rational(-1)).next, TentState::above());
  EXPECT_EQ(tent_step(TentState::active(Rational(1, 2)), Rational(3)).next, TentState::active(Rational(1)));
  EXPECT_EQ(tent_step(TentState::active(Rational(1)), Rational(1)).next, TentState::below());
  EXPECT_EQ(tent_step(TentState::active(Rational(1)), Rational(0)).next, TentState::active(Rational(0)));
  EXPECT_EQ(tent_step(TentState::active(Rational(1)), Rational(0)).digit, Rational(2));
}

TEST(TentStep, MissingResidueIsAnError) {
  EXPECT_THROW(tent_step(TentState::active(Rational(1, 2))), PreconditionError);
  EXPECT_THROW(TentState::active(Rational(3, 2)), PreconditionError);
}

TEST(TentStep, ExitStatesAreAbsorbing) {
  EXPECT_EQ(tent_step(TentState::above()).next, TentState::below());
  EXPECT_EQ(tent_step(TentState::above()).digit, Rational(2));
  EXPECT_EQ(tent_step(TentState::below()).next, TentState::below());
  EXPECT_EQ(tent_step(TentState::below()).digit, Rational(0));
}

TEST(TentOrbit, Examples) {
  TentOrbit a = tent_orbit(Rational(2, 3));
  EXPECT_EQ(a.preperiod, 0);
  EXPECT_EQ(a.period, 1);
  TentOrbit b = tent_orbit(Rational(1, 3));
  EXPECT_EQ(b.preperiod, 1);
  EXPECT_EQ(b.period, 1);
  TentOrbit c = tent_orbit(Rational(1, 5));
  EXPECT_EQ(c.preperiod, 1);
  EXPECT_EQ(c.period, 2);
  ASSERT_EQ(c.states.size(), 3u);
  EXPECT_EQ(c.states[1], TentState::active(Rational(2, 5)));
  EXPECT_EQ(c.states[2], TentState::active(Rational(4, 5)));
}

TEST(TentOrbit, EtaMatchesDirectSum) {
  // 1/5 -> 2/5 -> 4/5 -> 2/5: digits 2/5, (4/5, 2/5) repeating
  TentOrbit c = tent_orbit(Rational(1, 5));
  // eta = (1/4)(2/5) + (1/16)(4/5 + (8/5)/4) * 16/15
  Rational tail = (Rational(4, 5) + Rational(8, 5) / 4) * Rational(16, 15) / 16;
  EXPECT_EQ(c.eta, Rational(2, 5) / 4 + tail);
}

TEST(TentOrbit, EveryRationalTerminates) {
  for (long q = 1; q <= 60; ++q) {
    for (long p = 0; p <= q; ++p) {
      TentOrbit o = tent_orbit(Rational(p, q));
      ASSERT_GE(o.period, 1);
      Rational r0(p, q);
      for (const TentState& s : o.states) {
        if (s.is_active()) {
          EXPECT_LE(s.r.get_den(), r0.get_den());
        }
      }
    }
  }
}

TEST(TentCycle, AgreesWithTentOrbitAwayFromBranches) {
  // tent_cycle ignores residues, so compare only orbits that never visit 0, 1/2 or 1
  for (long q = 3; q <= 200; q += 2) {
    for (long p = 1; p < q; ++p) {
      auto [pre, per] = tent_cycle(p, q);
      TentOrbit o = tent_orbit(Rational(p, q));
      EXPECT_EQ(pre, o.preperiod) << p << "/" << q;
      EXPECT_EQ(per, o.period) << p << "/" << q;
    }
  }
}

TEST(LattesHeight, Examples) {
  EXPECT_EQ(lattes_local_height(parse_point("t")).value, Rational(-1, 2));
  EXPECT_EQ(lattes_local_height(parse_point("1")).value, Rational(0));
  EXPECT_EQ(lattes_local_height(parse_point("1/t")).value, Rational(1));
  EXPECT_THROW(lattes_local_height(ProjPoint::infinity()), PreconditionError);
}

TEST(LattesHeight, SymbolicModeUsesOracle) {
  LattesHeight generic = lattes_symbolic_height(Rational(1, 4));
  EXPECT_EQ(generic.digits.front(), Rational(1, 2));
  // 1/4 -> 1/2; with residue 1 at 1/2 the orbit leaves above
  LattesHeight special = lattes_symbolic_height(Rational(1, 4), [](const Rational&) { return Rational(1); });
  EXPECT_EQ(special.states[2], TentState::above());
  EXPECT_EQ(generic.states[2], TentState::active(Rational(1)));
  // both branches emit 1/2, 1, 2, 0, 0, ... so the height is the same
  EXPECT_EQ(generic.eta, special.eta);
  EXPECT_EQ(generic.eta, Rational(7, 32));
}

TEST(LattesHeight, AgreesWithGenericHeights) {
  HomogPair F = lattes_map();
  for (const char* a : {"t", "1", "1/t", "2", "t^2", "t+3", "(t-1)/(t+2)", "1/t^3", "3*t", "t/(t+1)"}) {
    LattesHeight lh = lattes_local_height(parse_point(a));
    LocalHeightResult g = local_height(F, parse_point(a), Place::t());
    EXPECT_TRUE(g.enclosure.contains(lh.value)) << a;
    if (g.exact) {
      EXPECT_EQ(g.value, lh.value) << a;
    }
  }
}

TEST(LattesHeight, TentDigitsMatchOrderFunction) {
  HomogPair F = lattes_map();
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 50) {
    FFElem a = testing::nonzero_ffelem(rng, 2, 4);
    // multiply by a power of t so that v(a) lands in [-3, 3]
    long shift = static_cast<long>(rng() % 7) - 3 - valuation(a, Place::t()).value();
    a = a * FFElem::t().pow(shift);
    ProjPoint x(a);
    TentState s = TentState::from_valuation(detail::lattes_valuation(x));
    for (int n = 0; n < 3 && !x.is_infinity(); ++n) {
      std::optional<Rational> res;
      if (s.needs_residue()) res = detail::lattes_residue(s, x);
      TentStep st = tent_step(s, res);
      EXPECT_EQ(st.digit, Rational(order_sigma(F, x, Place::t()))) << a.str() << " step " << n;
      s = st.next;
      x = apply_map(F, x);
    }
    ++checked;
  }
}

}  // namespace
}  // namespace qth
