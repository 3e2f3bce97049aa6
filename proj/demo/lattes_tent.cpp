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
// The Legendre-family Lattes map: exact heights through the tent map, and
// the same values recovered from the generic order-function machinery.

#include <iostream>

#include "qth/qth.hpp"

int main() {
  using namespace qth;
  HomogPair F = lattes_map();
  std::cout << "f(z) = " << map_to_string(F) << "\n\n";

  for (const char* a : {"t", "1", "1/t", "t^2+t", "(t-1)/(t+2)", "3"}) {
    LattesHeight h = lattes_local_height(parse_point(a));
    LocalHeightResult g = local_height(F, parse_point(a), Place::t());
    std::cout << "lambda(" << a << ") = " << to_string(h.value) << "  tent states:";
    for (const TentState& s : h.states) std::cout << " " << s.str();
    std::cout << "  generic path: " << (g.exact ? to_string(g.value)
                                                   : "[" + to_string(g.enclosure.lo) + ", " + to_string(g.enclosure.hi) + "]") << "\n";
  }

  // r need not be an integer: these are points over a ramified extension
  std::cout << "\ntent orbits with generic residues, height of a point with v(a) = r:\n";
  for (Rational r : {Rational(1, 5), Rational(2, 7), Rational(3, 11), Rational(5, 13)}) {
    TentOrbit o = tent_orbit(r);
    std::cout << "  " << to_string(r) << ": preperiod " << o.preperiod << ", period " << o.period << ", lambda "
              << to_string(-o.eta) << "\n";
  }
  return 0;
}
