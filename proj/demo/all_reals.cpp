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
// Walks through the map f(z) = (z+1)(z-t)/(z+t): exact heights at a few
// points, then points whose heights approach chosen targets in [-1, 0].

#include <cstdio>
#include <iostream>

#include "qth/qth.hpp"

int main() {
  using namespace qth;
  FamilyMap fam = build_family("z+1");
  std::cout << "f(z) = " << map_to_string(fam.F) << "\n\n";

  for (const char* a : {"0", "-1", "-t", "1", "t/(1-2*t)"}) {
    LocalHeightResult h = local_height(fam.F, parse_point(a), Place::t());
    std::cout << "lambda(" << a << ") = " << to_string(h.value) << "  [" << h.certificate.kind_name() << "]\n";
  }

  std::cout << "\ntargets at depth 20:\n";
  for (Rational alpha : {Rational(-1, 3), Rational(-5, 7), Rational(-1, 10)}) {
    TargetResult r = target_alpha(fam, alpha, 20, {}, false);
    std::cout << "  alpha = " << to_string(alpha) << ": height in [" << to_string(r.enclosure.lo) << ", "
              << to_string(r.enclosure.hi) << "], digits " << (r.realization.verified ? "verified" : "NOT verified") << "\n";
  }

  std::vector<int> tm;
  for (int i = 0; i < 16; ++i) tm.push_back(__builtin_popcount(static_cast<unsigned>(i)) & 1);
  ItineraryResult r = realize_itinerary(fam, tm);
  std::cout << "\nThue-Morse prefix of length 16: ";
  for (long d : r.digits) std::cout << d;
  std::cout << (r.verified ? " (verified)" : " (not verified)") << "\n";
  std::cout << "point ~ " << r.point.with_cutoff(Rational(6)).str(8) << "\n";
  return 0;
}
