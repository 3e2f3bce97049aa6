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
#include <set>

#include "qth/qth.hpp"

namespace qth {
namespace {

using Pair = std::pair<long, long>;

Rational rpow(long b, long k) {
  Rational r(1);
  for (long i = 0; i < k; ++i) r *= b;
  return r;
}

std::set<Pair> brute(const IntersectionInstance& in, long box) {
  std::set<Pair> out;
  for (long m = 0; m <= box; ++m)
    for (long n = 0; n <= box; ++n)
      if (abs(rpow(in.d, m) * in.H1 - rpow(in.e, n) * in.H2) <= in.C) out.insert({m, n});
  return out;
}

std::set<Pair> in_box(const std::vector<Pair>& v, long box) {
  std::set<Pair> out;
  for (const Pair& p : v)
    if (p.first <= box && p.second <= box) out.insert(p);
  return out;
}

TEST(MultIndependent, Verdicts) {
  EXPECT_TRUE(mult_independent(2, 3).independent);
  MultDependence a = mult_independent(4, 8);
  EXPECT_FALSE(a.independent);
  EXPECT_EQ(a.k, 3);
  EXPECT_EQ(a.l, 2);
  EXPECT_TRUE(mult_independent(6, 12).independent);
  MultDependence b = mult_independent(36, 216);
  EXPECT_FALSE(b.independent);
  EXPECT_EQ(rpow(36, b.k), rpow(216, b.l));
  EXPECT_THROW(mult_independent(1, 3), PreconditionError);
}

TEST(MultIndependent, AgreesWithPowerSearch) {
  for (long d = 2; d <= 40; ++d) {
    for (long e = 2; e <= 40; ++e) {
      bool found = false;
      for (long k = 1; k <= 6 && !found; ++k)
        for (long l = 1; l <= 6 && !found; ++l) found = rpow(d, k) == rpow(e, l);
      EXPECT_EQ(mult_independent(d, e).independent, !found) << d << ", " << e;
    }
  }
}

TEST(SolveEqual, Examples) {
  EqualSolutions a = solve_equal(Rational(1), Rational(1), 2, 3);
  EXPECT_EQ(a.solutions, (std::vector<Pair>{{0, 0}}));
  EqualSolutions b = solve_equal(Rational(3), Rational(2), 2, 3);
  EXPECT_EQ(b.solutions, (std::vector<Pair>{{1, 1}}));
  EqualSolutions c = solve_equal(Rational(1), Rational(1), 2, 4);
  EXPECT_TRUE(c.dependent);
  ASSERT_TRUE(c.family.has_value());
  EXPECT_EQ(c.family->m0, 0);
  EXPECT_EQ(c.family->n0, 0);
  EXPECT_EQ(c.family->dm, 2);
  EXPECT_EQ(c.family->dn, 1);
}

TEST(SolveEqual, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> deg(2, 12), h(1, 30);
  for (int i = 0; i < 100; ++i) {
    long d = deg(rng), e = deg(rng);
    Rational H1 = ratio(h(rng), h(rng)), H2 = ratio(h(rng), h(rng));
    EqualSolutions s = solve_equal(H1, H2, d, e);
    std::set<Pair> want;
    for (long m = 0; m <= 20; ++m)
      for (long n = 0; n <= 20; ++n)
        if (rpow(d, m) * H1 == rpow(e, n) * H2) want.insert({m, n});
    std::set<Pair> got;
    if (!s.dependent) {
      got.insert(s.solutions.begin(), s.solutions.end());
    } else if (s.family) {
      for (long k = 0; s.family->m0 + k * s.family->dm <= 20 && s.family->n0 + k * s.family->dn <= 20; ++k)
        got.insert({s.family->m0 + k * s.family->dm, s.family->n0 + k * s.family->dn});
      // members beyond the box in one coordinate only are not in the brute set
      for (auto it = got.begin(); it != got.end();) it = (it->first > 20 || it->second > 20) ? got.erase(it) : std::next(it);
    }
    EXPECT_EQ(got, want) << H1 << " " << H2 << " " << d << " " << e;
  }
}

TEST(BoundedIntersections, Examples) {
  IntersectionResult a = bounded_intersections({Rational(1), Rational(1), 2, 3, Rational(0)});
  EXPECT_EQ(a.solutions, (std::vector<Pair>{{0, 0}}));
  IntersectionResult b = bounded_intersections({Rational(1), Rational(1), 2, 3, Rational(1)});
  EXPECT_EQ(in_box(b.solutions, 20), brute({Rational(1), Rational(1), 2, 3, Rational(1)}, 20));
  EXPECT_EQ(b.bound_kind, "search-horizon");
  EXPECT_FALSE(b.rigorous);
  IntersectionInstance c{Rational(5), Rational(7), 3, 2, Rational(1, 2)};
  EXPECT_EQ(in_box(bounded_intersections(c).solutions, 30), brute(c, 30));
}

TEST(BoundedIntersections, DependentDegreesAreRejected) {
  EXPECT_THROW(bounded_intersections({Rational(1), Rational(1), 2, 4, Rational(1)}), PreconditionError);
}

TEST(BoundedIntersections, SharedFactorGivesProvedBound) {
  IntersectionInstance in{Rational(3), Rational(2), 6, 12, Rational(5)};
  IntersectionResult r = bounded_intersections(in);
  EXPECT_TRUE(r.rigorous);
  EXPECT_EQ(r.bound_kind, "gcd-divisibility");
  std::set<Pair> all = brute(in, 40);
  EXPECT_EQ(std::set<Pair>(r.solutions.begin(), r.solutions.end()), all);
  for (const Pair& p : all) {
    EXPECT_LE(p.first, r.m_bound);
    EXPECT_LE(p.second, r.n_bound);
  }
}

TEST(BoundedIntersections, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> deg(2, 12), h(1, 20), c(0, 10);
  int done = 0;
  while (done < 100) {
    IntersectionInstance in{ratio(h(rng), h(rng)), ratio(h(rng), h(rng)), deg(rng), deg(rng), Rational(c(rng))};
    if (!mult_independent(in.d, in.e).independent) continue;
    IntersectionResult r = bounded_intersections(in);
    EXPECT_EQ(in_box(r.solutions, 25), brute(in, 25)) << in.H1 << " " << in.H2 << " " << in.d << " " << in.e << " " << in.C;
    // attained is the set of values taken by the solutions
    std::set<Rational> values;
    for (auto [m, n] : r.solutions) values.insert(rpow(in.d, m) * in.H1 - rpow(in.e, n) * in.H2);
    EXPECT_EQ(std::set<Rational>(r.attained.begin(), r.attained.end()), values);
    EXPECT_EQ(r.attained.size(), values.size());
    for (const Rational& v : values) EXPECT_LE(abs(v), in.C);
    ++done;
  }
}

}  // namespace
}  // namespace qth
