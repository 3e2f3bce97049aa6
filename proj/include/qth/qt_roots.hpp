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

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/parse.hpp"
#include "qth/poly.hpp"
#include "qth/zpoly_factor.hpp"
#include "qth/zt_poly.hpp"

namespace qth {

/// A root in Q(t) of a polynomial over Q(t), with multiplicity.
struct QtRoot {
  FFElem value;
  int multiplicity = 1;
};

namespace detail {

/// Truncated power-series product modulo s^k.
inline std::vector<Rational> series_mul(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t k) {
  std::vector<Rational> r(k);
  for (std::size_t i = 0; i < a.size() && i < k; ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < k; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Evaluates sum_i H_i(s) z(s)^i modulo s^k, with H_i and z given as series.
inline std::vector<Rational> series_eval(const std::vector<QPoly>& h, const std::vector<Rational>& z, std::size_t k) {
  std::vector<Rational> acc(k);
  for (std::size_t i = h.size(); i-- > 0;) {
    acc = series_mul(acc, z, k);
    const auto& c = h[i].coeffs();
    for (std::size_t j = 0; j < c.size() && j < k; ++j) acc[j] += c[j];
  }
  return acc;
}

/// Reconstructs a/b with deg a <= na, deg b <= nb from the series of a/b
/// known modulo s^k (k > na + nb), or returns false.
inline bool pade(const std::vector<Rational>& series, std::size_t k, int na, FFElem& out) {
  QPoly r0 = QPoly::monomial(Rational(1), k), r1(series);
  QPoly t0, t1(Rational(1));
  while (!r1.is_zero_poly() && r1.degree() > na) {
    auto [q, r] = QPoly::divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1.is_zero_poly() || is_zero(t1.coeff(0))) return false;
  out = FFElem(r1, t1);
  return true;
}

}  // namespace detail

/// All roots of g in Q(t) with multiplicities, in a deterministic order
/// (root 0 first, then by total degree and printed form).
///
/// Roots are found by choosing a specialization t = t0 at which g stays
/// squarefree, lifting each rational root of g(t0, z) to a power series in
/// t - t0, and recovering a rational function by Pade approximation. Every
/// candidate is verified exactly, so the output never contains a spurious root.
inline std::vector<QtRoot> qt_roots(const ZtPoly& g) {
  if (g.is_zero_poly()) throw PreconditionError("qt_roots of the zero polynomial");
  std::vector<QtRoot> out;
  if (g.degree() == 0) return out;
  std::size_t k0 = 0;
  while (k0 < g.size() && g.coeffs()[k0].is_zero()) ++k0;
  if (k0 > 0) out.push_back({FFElem(), static_cast<int>(k0)});
  ZtPoly h(std::vector<FFElem>(g.coeffs().begin() + static_cast<long>(k0), g.coeffs().end()));
  if (h.degree() >= 1) {
    ZtPoly sq = zt_gcd(h, h.derivative());
    ZtPoly core = sq.degree() > 0 ? h / sq : h;
    std::vector<QPoly> H = detail::clear_z_denominators(core);
    const int n = static_cast<int>(H.size()) - 1;
    const int na = H.front().degree(), nb = H.back().degree();

    // specialization point keeping degree and squarefreeness
    Rational t0;
    bool found = false;
    for (int i = 0; i < 200 && !found; ++i) {
      t0 = Rational((i + 1) / 2 * (i % 2 == 0 ? -1 : 1));
      if (is_zero(H.back().eval(t0)) || is_zero(H.front().eval(t0))) continue;
      std::vector<Rational> sp;
      for (const QPoly& c : H) sp.push_back(c.eval(t0));
      QPoly s(sp);
      if (gcd(s, s.derivative()).degree() == 0) found = true;
    }
    if (!found) throw ResourceCapError("qt_roots: no squarefree specialization found");

    std::vector<QPoly> Hs;
    QPoly shift(std::vector<Rational>{t0, Rational(1)});
    for (const QPoly& c : H) Hs.push_back(c.compose(shift));
    std::vector<Rational> s0;
    for (const QPoly& c : Hs) s0.push_back(c.coeff(0));
    QPoly special(s0);
    QPoly dspecial = special.derivative();
    const std::size_t K = static_cast<std::size_t>(na + nb + 2);
    const FFElem back = FFElem(QPoly(std::vector<Rational>{-t0, Rational(1)}));

    for (const Rational& r0 : rational_roots(special)) {
      std::vector<Rational> z(K);
      z[0] = r0;
      Rational inv_d = 1 / dspecial.eval(r0);
      for (std::size_t i = 1; i < K; ++i) {
        std::vector<Rational> res = detail::series_eval(Hs, z, i + 1);
        z[i] = -res[i] * inv_d;
      }
      FFElem cand;
      if (!detail::pade(z, K, na, cand)) continue;
      FFElem root = cand.substitute(back);
      if (!eval_zt(core, root).is_zero()) continue;
      (void)n;
      int mult = 0;
      ZtPoly rest = g;
      ZtPoly lin(std::vector<FFElem>{-root, FFElem(1)});
      for (;;) {
        auto [q, r] = ZtPoly::divmod(rest, lin);
        if (!r.is_zero_poly()) break;
        rest = std::move(q);
        ++mult;
      }
      out.push_back({root, mult});
    }
  }
  std::sort(out.begin() + (k0 > 0 ? 1 : 0), out.end(), [](const QtRoot& a, const QtRoot& b) {
    if (a.value.height_degree() != b.value.height_degree()) return a.value.height_degree() < b.value.height_degree();
    return a.value.str() < b.value.str();
  });
  return out;
}

}  // namespace qth
