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
#pragma once

#include <utility>
#include <vector>

#include "qth/ffelem.hpp"
#include "qth/poly.hpp"

namespace qth {

/// Polynomials in z over Q(t).
using ZtPoly = Poly<FFElem>;

/// Horner evaluation of a polynomial over Q(t) at x.
inline FFElem eval_zt(const ZtPoly& g, const FFElem& x) {
  FFElem acc;
  for (std::size_t i = g.size(); i-- > 0;) acc = acc * x + g.coeffs()[i];
  return acc;
}

namespace detail {

/// Coefficients of g rescaled by a common denominator so they lie in Q[t].
inline std::vector<QPoly> clear_z_denominators(const ZtPoly& g) {
  QPoly l(Rational(1));
  for (const FFElem& c : g.coeffs()) {
    if (c.den().degree() > 0) l = l * (c.den() / gcd(l, c.den()));
  }
  std::vector<QPoly> out;
  out.reserve(g.size());
  for (const FFElem& c : g.coeffs()) out.push_back(c.num() * (l / c.den()));
  return out;
}

/// Divides out the Q[t]-content; the first nonzero leading data is made monic.
inline void make_primitive(std::vector<QPoly>& a) {
  QPoly c;
  for (const QPoly& x : a) {
    c = c.is_zero_poly() ? x.monic() : gcd(c, x);
    if (c.degree() == 0) break;
  }
  if (c.is_zero_poly()) return;
  c = Rational(a.back().lc()) * c;
  for (QPoly& x : a) x = x / c;
}

/// Pseudo-remainder of a by b in Q[t][z] (coefficient vectors, low to high).
inline std::vector<QPoly> pseudo_rem(std::vector<QPoly> a, const std::vector<QPoly>& b) {
  const std::size_t nb = b.size();
  const QPoly& lb = b.back();
  while (a.size() >= nb) {
    QPoly la = a.back();
    std::size_t shift = a.size() - nb;
    for (QPoly& x : a) x = x * lb;
    for (std::size_t i = 0; i < nb; ++i) a[i + shift] -= la * b[i];
    while (!a.empty() && a.back().is_zero_poly()) a.pop_back();
  }
  return a;
}

}  // namespace detail

/// Monic gcd in Q(t)[z], computed by a primitive remainder sequence over Q[t]
/// to keep coefficient growth in check.
inline ZtPoly zt_gcd(const ZtPoly& x, const ZtPoly& y) {
  if (x.is_zero_poly()) return y.is_zero_poly() ? ZtPoly() : y.monic();
  if (y.is_zero_poly()) return x.monic();
  std::vector<QPoly> a = detail::clear_z_denominators(x), b = detail::clear_z_denominators(y);
  if (a.size() < b.size()) std::swap(a, b);
  detail::make_primitive(a);
  detail::make_primitive(b);
  while (!b.empty()) {
    if (b.size() == 1) return ZtPoly(FFElem(1));
    std::vector<QPoly> r = detail::pseudo_rem(a, b);
    if (!r.empty()) detail::make_primitive(r);
    a = std::move(b);
    b = std::move(r);
  }
  std::vector<FFElem> c;
  c.reserve(a.size());
  for (QPoly& q : a) c.emplace_back(std::move(q));
  return ZtPoly(std::move(c)).monic();
}

}  // namespace qth
