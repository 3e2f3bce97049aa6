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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/heights.hpp"
#include "qth/maps.hpp"
#include "qth/parse.hpp"
#include "qth/puiseux.hpp"
#include "qth/qt_roots.hpp"
#include "qth/rational.hpp"

namespace qth {

/// Outcome of the infinite-orbit check for 0 under g.
struct OrbitCheck {
  bool infinite = false;
  bool proved = false;  // false when only the bounded cycle search was run
  std::string method;
  int steps = 0;
};

/// The map f(z) = g(z)(z - t)/(z + t) for a rational map g over Q with
/// g(inf) = inf and 0 of infinite g-orbit; studied at the place t.
struct FamilyMap {
  HomogPair F;
  QPoly gnum, gden;
  Rational g0;
  OrbitCheck check;
  std::string g_text;
};

namespace detail {

inline QPoly constant_coefficients(const ZtPoly& p, const char* what) {
  std::vector<Rational> c;
  for (const FFElem& x : p.coeffs()) {
    if (!x.is_constant()) throw PreconditionError(std::string(what) + " must not involve t");
    c.push_back(x.is_zero() ? Rational(0) : Rational(x.num().coeff(0) / x.den().coeff(0)));
  }
  return QPoly(std::move(c));
}

inline Rational eval_ratio(const QPoly& n, const QPoly& d, const Rational& x) { return n.eval(x) / d.eval(x); }

inline OrbitCheck zero_orbit_infinite(const QPoly& n, const QPoly& d, int max_steps = 10000) {
  OrbitCheck out;
  if (d.degree() == 0 && n.degree() == 1) {
    // g(z) = a z + b: the orbit of 0 is finite iff b = 0, a = 0 or a = -1
    Rational a = n.coeff(1) / d.coeff(0), b = n.coeff(0) / d.coeff(0);
    out.proved = true;
    out.method = "affine";
    out.infinite = !is_zero(b) && !is_zero(a) && a != Rational(-1);
    return out;
  }
  std::optional<Rational> radius;
  if (d.degree() == 0) {
    // |z| > R implies |g(z)| > |z| with R = 2 + sum |a_i / a_n|
    Rational R(2);
    for (int i = 0; i < n.degree(); ++i) R += abs(n.coeff(static_cast<std::size_t>(i)) / n.lc());
    radius = R;
  }
  std::set<Rational> seen;
  Rational z(0);
  for (int k = 0; k < max_steps; ++k) {
    out.steps = k;
    if (!seen.insert(z).second) {
      out.proved = true;
      out.method = "cycle";
      out.infinite = false;
      return out;
    }
    if (radius && abs(z) > *radius) {
      out.proved = true;
      out.method = "escape-radius";
      out.infinite = true;
      return out;
    }
    if (is_zero(d.eval(z))) {
      out.proved = true;
      out.method = "pole";
      out.infinite = false;  // reaches infinity, which is fixed
      return out;
    }
    z = eval_ratio(n, d, z);
    if (mpz_sizeinbase(z.get_num_mpz_t(), 2) + mpz_sizeinbase(z.get_den_mpz_t(), 2) > 65536) break;
  }
  out.proved = false;
  out.method = "bounded-cycle-search";
  out.infinite = true;
  return out;
}

}  // namespace detail

/// Builds f = g(z)(z - t)/(z + t) from the text of g (a map in z alone).
inline FamilyMap build_family(const std::string& g_text) {
  ZtRatFun g = parse_zt_ratfun(g_text);
  FamilyMap out;
  out.g_text = g_text;
  out.gnum = detail::constant_coefficients(g.num, "g");
  out.gden = detail::constant_coefficients(g.den, "g");
  QPoly c = gcd(out.gnum, out.gden);
  if (c.degree() > 0) {
    out.gnum = out.gnum / c;
    out.gden = out.gden / c;
  }
  if (out.gnum.is_zero_poly()) throw PreconditionError("g must be non-constant");
  int dg = std::max(out.gnum.degree(), out.gden.degree());
  if (dg < 1) throw PreconditionError("g must have degree at least 1");
  if (out.gnum.degree() <= out.gden.degree()) throw PreconditionError("g must fix infinity");
  if (dg == 1 && out.gden.degree() == 0 && out.gnum.coeff(0) == 0 && out.gnum.coeff(1) == out.gden.coeff(0))
    throw PreconditionError("g = z is excluded");
  out.check = detail::zero_orbit_infinite(out.gnum, out.gden);
  if (!out.check.infinite) throw PreconditionError("0 has a finite orbit under g (" + out.check.method + ")");
  out.g0 = out.gnum.coeff(0) / out.gden.coeff(0);
  out.F = parse_map("(" + g_text + ")*(z-t)/(z+t)");
  return out;
}

/// Recovers g from a map written as f = g(z)(z - t)/(z + t).
inline FamilyMap family_from_map(const std::string& f_text) {
  ZtRatFun g = parse_zt_ratfun("(" + f_text + ")*(z+t)/(z-t)");
  for (const ZtPoly* p : {&g.num, &g.den})
    for (const FFElem& c : p->coeffs())
      if (!c.is_constant()) throw PreconditionError("map is not of the form g(z)(z-t)/(z+t) with g over Q");
  std::string text = "(" + detail::zt_poly_to_string(g.num, g.num.degree(), false) + ")/(" +
                     detail::zt_poly_to_string(g.den, g.den.degree(), false) + ")";
  return build_family(text);
}

/// Disk D_n = {z : v(z - center_n) > rho_n} containing every point whose
/// first n + 1 digits agree with the realized prefix.
struct ChainDisk {
  PuiseuxApprox center;
  Rational rho;
};

/// A point realizing a prescribed prefix of spine digits under a family map.
struct ItineraryResult {
  std::vector<int> bits;
  PuiseuxApprox point;
  bool point_infinite = false;
  std::optional<FFElem> exact;  // set when the construction stayed inside Q(t)
  std::vector<ChainDisk> chain;
  std::vector<long> digits;  // digits re-derived by forward evaluation
  bool verified = false;
};

namespace detail {

/// Durand-Kerner roots of sum c_i z^i (c non-empty, leading entry nonzero).
inline std::vector<BigComplex> complex_roots(std::vector<BigComplex> c) {
  while (c.size() > 1 && c.back().abs() == 0) c.pop_back();
  std::size_t m = c.size() - 1;
  std::vector<BigComplex> r;
  if (m == 0) return r;
  BigComplex lead = c.back();
  for (auto& x : c) x = x / lead;
  if (m == 1) return {-c[0]};
  BigComplex w(BigFloat("0.4"), BigFloat("0.9")), p(1);
  for (std::size_t i = 0; i < m; ++i) {
    r.push_back(p);
    p *= w;
  }
  for (int it = 0; it < 2000; ++it) {
    BigFloat moved = 0;
    for (std::size_t i = 0; i < m; ++i) {
      BigComplex num = c[m];
      for (std::size_t k = m; k-- > 0;) num = num * r[i] + c[k];
      BigComplex den(1);
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) den *= r[i] - r[j];
      BigComplex step = num / den;
      r[i] -= step;
      moved = std::max(moved, step.abs());
    }
    if (moved < BigFloat("1e-60")) break;
  }
  std::sort(r.begin(), r.end(), [](const BigComplex& a, const BigComplex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return r;
}

inline std::vector<PuiseuxApprox> series_coeffs(const std::vector<FFElem>& c, const Rational& cut, double tol) {
  std::vector<PuiseuxApprox> out;
  for (const FFElem& x : c) out.push_back(to_local_series(x, Place::t(), cut, tol));
  return out;
}

/// min(v(P(y)), v(Q(y))) - d min(0, v(y)) along with f(y); nullopt digit when
/// the truncation leaves it undetermined.
struct ForwardStep {
  std::optional<Rational> sigma;
  PuiseuxApprox next;
  bool next_infinite = false;
};

inline ForwardStep forward_step(const std::vector<PuiseuxApprox>& P, const std::vector<PuiseuxApprox>& Q, int d,
                                const PuiseuxApprox& y, bool y_inf) {
  ForwardStep s;
  if (y_inf) {
    ExtRational vp = P.back().pval(), vq = Q.back().pval();
    if (vq.is_inf()) {
      s.next_infinite = true;
      s.sigma = vp.value();
      return s;
    }
    s.sigma = vp.is_inf() ? vq.value() : std::min(vp.value(), vq.value());
    s.next = p_div(P.back(), Q.back());
    return s;
  }
  ExtRational vy = y.pval();
  bool neg = !vy.is_inf() && vy.value() < 0;
  PuiseuxApprox X, Y;
  if (neg) {
    // homogeneous evaluation at (1, 1/y)
    PuiseuxApprox w = p_inv(y);
    std::vector<PuiseuxApprox> pr(P.rbegin(), P.rend()), qr(Q.rbegin(), Q.rend());
    X = p_poly_eval(pr, w);
    Y = p_poly_eval(qr, w);
  } else {
    X = p_poly_eval(P, y);
    Y = p_poly_eval(Q, y);
  }
  s.sigma = determined_min(X, Y);
  (void)d;
  if (Y.is_numerically_zero()) {
    s.next_infinite = true;
  } else {
    s.next = p_div(X, Y);
  }
  return s;
}

}  // namespace detail

/// Realizes the digit prefix `bits` (entries 0 or 1) for a family map by
/// backward Newton steps from infinity and re-derives the digits forward.
inline ItineraryResult realize_itinerary(const FamilyMap& fam, const std::vector<int>& bits, const PrecisionBudget& budget = {}) {
  const int N = static_cast<int>(bits.size());
  for (int b : bits)
    if (b != 0 && b != 1) throw PreconditionError("itinerary digits must be 0 or 1");
  PrecisionScope scope(budget.bits);
  const HomogPair& F = fam.F;
  // each digit 1 costs one order of precision in the forward pass
  Rational cut = budget.cutoff + Rational(static_cast<long>(std::count(bits.begin(), bits.end(), 1)));
  std::vector<PuiseuxApprox> P = detail::series_coeffs(F.P, cut, budget.tol), Q = detail::series_coeffs(F.Q, cut, budget.tol);
  ItineraryResult out;
  out.bits = bits;
  bool all_zero = std::none_of(bits.begin(), bits.end(), [](int b) { return b != 0; });
  PuiseuxApprox y;
  bool y_inf = false;
  std::optional<FFElem> ex;
  if (all_zero) {
    // the unit point 1; forward verification below confirms its digits
    y = PuiseuxApprox::constant(BigComplex(1), cut, budget.tol);
    ex = FFElem(1);
  } else {
    y_inf = true;
    for (int n = N - 1; n >= 0; --n) {
      int b = bits[static_cast<std::size_t>(n)];
      if (y_inf) {
        if (b == 0) continue;  // infinity is fixed and stays on the digit-0 side
        y_inf = false;
        y = PuiseuxApprox::monomial(BigComplex(-1), Rational(1), cut, budget.tol);
        ex = -FFElem::t();
        continue;
      }
      ExtRational vy = y.pval();
      if (!vy.is_inf() && vy.value() < 0) throw NewtonError("itinerary step from a point of negative valuation");
      BigComplex ybar = vy.is_inf() || vy.value() > 0 ? BigComplex(0) : y.coefficient(Rational(0));
      PuiseuxApprox seed;
      if (b == 1) {
        // near zeta_1, f(t u) reduces to g(0)(u - 1)/(u + 1)
        BigComplex g0(fam.g0);
        if ((g0 - ybar).abs() < BigFloat("1e-30")) throw NewtonError("itinerary step lands in the excluded direction of zeta_1");
        seed = PuiseuxApprox::monomial((g0 + ybar) / (g0 - ybar), Rational(1), cut, budget.tol);
      } else {
        std::vector<BigComplex> c;
        for (std::size_t i = 0; i < std::max(fam.gnum.size(), fam.gden.size()); ++i)
          c.push_back(BigComplex(fam.gnum.coeff(i)) - ybar * BigComplex(fam.gden.coeff(i)));
        std::optional<BigComplex> pick;
        for (const BigComplex& r : detail::complex_roots(c))
          if (r.abs() > BigFloat("1e-30")) {
            pick = r;
            break;
          }
        if (!pick) throw NewtonError("no preimage direction away from the spine for a digit 0");
        seed = PuiseuxApprox::constant(*pick, cut, budget.tol);
      }
      std::vector<PuiseuxApprox> G;
      for (int i = 0; i <= F.d; ++i) G.push_back(p_sub(P[static_cast<std::size_t>(i)], p_mul(y, Q[static_cast<std::size_t>(i)])));
      PuiseuxApprox root = newton_root(G, seed);
      std::optional<FFElem> next_ex;
      if (ex) {
        std::vector<FFElem> gc;
        for (int i = 0; i <= F.d; ++i) gc.push_back(F.P[static_cast<std::size_t>(i)] - *ex * F.Q[static_cast<std::size_t>(i)]);
        for (const QtRoot& r : qt_roots(ZtPoly(gc))) {
          PuiseuxApprox s = to_local_series(r.value, Place::t(), root.cutoff(), budget.tol);
          PuiseuxApprox diff = p_sub(s, root);
          if (diff.is_numerically_zero() || diff.val_or_cutoff() >= root.cutoff() / 2) {
            next_ex = r.value;
            break;
          }
        }
      }
      ex = next_ex;
      y = root;
    }
  }
  out.point = y;
  out.point_infinite = y_inf;
  out.exact = ex;
  // forward verification
  out.verified = true;
  PuiseuxApprox x = y;
  bool x_inf = y_inf;
  Rational rho(0);
  for (int n = 0; n < N; ++n) {
    detail::ForwardStep s = detail::forward_step(P, Q, F.d, x, x_inf);
    if (!s.sigma || *s.sigma != Rational(bits[static_cast<std::size_t>(n)])) {
      out.verified = false;
      break;
    }
    out.digits.push_back(bits[static_cast<std::size_t>(n)]);
    rho += Rational(bits[static_cast<std::size_t>(n)]);
    out.chain.push_back({y_inf ? PuiseuxApprox::zero(rho + 1, budget.tol) : y.with_cutoff(rho + 1), rho});
    x = s.next;
    x_inf = s.next_infinite;
  }
  return out;
}

/// Digits c_n with -alpha = sum c_n 2^{-(n+1)} (greedy, so -alpha = 1 gives
/// all ones).
inline std::vector<int> target_digits(const Rational& alpha, int N) {
  if (alpha < -1 || alpha > 0) throw PreconditionError("target height must lie in [-1, 0]");
  std::vector<int> c;
  Rational x = -alpha;
  for (int n = 0; n < N; ++n) {
    x *= 2;
    if (x >= 1) {
      c.push_back(1);
      x -= 1;
    } else {
      c.push_back(0);
    }
  }
  return c;
}

struct TargetResult {
  Rational alpha;
  int N = 0;
  ItineraryResult realization;
  Enclosure enclosure;  // contains the height of the realized point and alpha
  std::optional<FFElem> witness;
  std::optional<LocalHeightResult> witness_height;
};

namespace detail {

/// Points of Q(t) worth testing for an exact height alpha: small periodic
/// points, their first preimages, and a few simple constants.
inline std::vector<FFElem> witness_candidates(const HomogPair& F, int max_period = 3) {
  std::vector<FFElem> out{FFElem(0), FFElem(1), FFElem(-1), -FFElem::t()};
  std::vector<FFElem> periodic;
  for (int k = 1; k <= max_period; ++k) {
    HomogPair Fk;
    try {
      Fk = iterate_map(F, k, 64);
    } catch (const ResourceCapError&) {
      break;
    }
    std::vector<FFElem> c(static_cast<std::size_t>(Fk.d) + 2);
    for (int i = 0; i <= Fk.d; ++i) {
      c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] + Fk.P[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(i) + 1] = c[static_cast<std::size_t>(i) + 1] - Fk.Q[static_cast<std::size_t>(i)];
    }
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
    for (const QtRoot& r : qt_roots(ZtPoly(c))) periodic.push_back(r.value);
  }
  for (const FFElem& a : periodic) {
    out.push_back(a);
    std::vector<FFElem> gc;
    for (int i = 0; i <= F.d; ++i) gc.push_back(F.P[static_cast<std::size_t>(i)] - a * F.Q[static_cast<std::size_t>(i)]);
    for (const QtRoot& r : qt_roots(ZtPoly(gc))) out.push_back(r.value);
  }
  std::vector<FFElem> uniq;
  for (const FFElem& a : out)
    if (std::find(uniq.begin(), uniq.end(), a) == uniq.end()) uniq.push_back(a);
  return uniq;
}

}  // namespace detail

/// Realizes a point whose local height at t is within 2^{-N} of alpha, and
/// searches Q(t) for a point of height exactly alpha.
inline TargetResult target_alpha(const FamilyMap& fam, const Rational& alpha, int N, const PrecisionBudget& budget = {},
                                 bool search_exact = true) {
  if (N < 1) throw PreconditionError("N must be positive");
  TargetResult out;
  out.alpha = alpha;
  out.N = N;
  std::vector<int> c = target_digits(alpha, N);
  out.realization = realize_itinerary(fam, c, budget);
  Rational eta(0), w(1, 2);
  for (int b : c) {
    eta += Rational(b) * w;
    w /= 2;
  }
  // the unknown tail contributes between 0 and 2^{-N}; v(a) >= 0 throughout
  out.enclosure = {-eta - 2 * w, -eta};
  if (!search_exact) return out;
  std::vector<FFElem> cands;
  if (out.realization.exact) cands.push_back(*out.realization.exact);
  for (const FFElem& a : detail::witness_candidates(fam.F)) cands.push_back(a);
  for (const FFElem& a : cands) {
    try {
      LocalHeightResult h = local_height(fam.F, ProjPoint(a), Place::t());
      if (h.exact && h.value == alpha) {
        out.witness = a;
        out.witness_height = h;
        break;
      }
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace qth
