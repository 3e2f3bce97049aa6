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

// Factorization of univariate polynomials over Z and Q.
//
// Squarefree parts are factored modulo a small odd prime (distinct-degree
// then Cantor-Zassenhaus equal-degree splitting), Hensel-lifted with the
// quadratic two-factor step applied factor by factor, and recombined by
// subset trial division against a Mignotte-type coefficient bound.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qth/poly.hpp"
#include "qth/rational.hpp"

namespace qth {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using MPoly = std::vector<u64>;  // coefficients mod p, low to high

inline void mp_trim(MPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int mp_deg(const MPoly& a) { return static_cast<int>(a.size()) - 1; }
inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<u128>(a) * b) % p); }
inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline MPoly mp_add(const MPoly& a, const MPoly& b, u64 p) {
  MPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    u64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + y) % p;
  }
  mp_trim(r);
  return r;
}
inline MPoly mp_sub(const MPoly& a, const MPoly& b, u64 p) {
  MPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    u64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  mp_trim(r);
  return r;
}
inline MPoly mp_mul(const MPoly& a, const MPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  MPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  mp_trim(r);
  return r;
}
inline std::pair<MPoly, MPoly> mp_divmod(const MPoly& a, const MPoly& b, u64 p) {
  if (mp_deg(a) < mp_deg(b)) return {{}, a};
  MPoly r = a, q(a.size() - b.size() + 1, 0);
  u64 inv = invmod(b.back(), p);
  for (int i = mp_deg(a) - mp_deg(b); i >= 0; --i) {
    u64 top = r[static_cast<std::size_t>(i) + b.size() - 1];
    if (!top) continue;
    u64 c = mulmod(top, inv, p);
    q[static_cast<std::size_t>(i)] = c;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = static_cast<std::size_t>(i) + j;
      r[k] = (r[k] + p - mulmod(c, b[j], p)) % p;
    }
  }
  mp_trim(q);
  mp_trim(r);
  return {q, r};
}
inline MPoly mp_monic(const MPoly& a, u64 p) {
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), p);
  MPoly r(a);
  for (auto& x : r) x = mulmod(x, inv, p);
  return r;
}
inline MPoly mp_gcd(MPoly a, MPoly b, u64 p) {
  while (!b.empty()) {
    MPoly r = mp_divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return mp_monic(a, p);
}
/// s*a + t*b = 1 for coprime a, b.
inline std::pair<MPoly, MPoly> mp_bezout(const MPoly& a, const MPoly& b, u64 p) {
  MPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = mp_divmod(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(r);
    MPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p), t2 = mp_sub(t0, mp_mul(q, t1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  u64 inv = invmod(r0.back(), p);
  for (auto& x : s0) x = mulmod(x, inv, p);
  for (auto& x : t0) x = mulmod(x, inv, p);
  return {s0, t0};
}
inline MPoly mp_powmod(MPoly base, const Integer& e, const MPoly& m, u64 p) {
  MPoly r{1};
  base = mp_divmod(base, m, p).second;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mp_divmod(mp_mul(r, r, p), m, p).second;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mp_divmod(mp_mul(r, base, p), m, p).second;
  }
  return r;
}
inline MPoly reduce_mod(const ZPoly& f, u64 p) {
  MPoly r;
  Integer P(static_cast<unsigned long>(p));
  for (const Integer& c : f.coeffs()) {
    Integer m;
    mpz_fdiv_r(m.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
    r.push_back(m.get_ui());
  }
  mp_trim(r);
  return r;
}

/// Distinct-degree factorization of a monic squarefree polynomial.
inline std::vector<std::pair<MPoly, int>> ddf(MPoly f, u64 p) {
  std::vector<std::pair<MPoly, int>> out;
  MPoly x{0, 1}, h = x;
  Integer P(static_cast<unsigned long>(p));
  int i = 1;
  while (mp_deg(f) >= 2 * i) {
    h = mp_powmod(h, P, f, p);
    MPoly g = mp_gcd(mp_sub(h, x, p), f, p);
    if (mp_deg(g) > 0) {
      out.emplace_back(g, i);
      f = mp_divmod(f, g, p).first;
      h = mp_divmod(h, f, p).second;
    }
    ++i;
  }
  if (mp_deg(f) > 0) out.emplace_back(f, mp_deg(f));
  return out;
}

/// Equal-degree splitting (p odd) of a monic product of degree-d irreducibles.
inline void edf(const MPoly& f, int d, u64 p, std::mt19937_64& rng, std::vector<MPoly>& out) {
  if (mp_deg(f) == d) {
    out.push_back(f);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, p - 1);
  for (;;) {
    MPoly a(static_cast<std::size_t>(mp_deg(f)), 0);
    for (auto& c : a) c = dist(rng);
    mp_trim(a);
    if (mp_deg(a) < 1) continue;
    MPoly g = mp_gcd(a, f, p);
    if (mp_deg(g) <= 0 || mp_deg(g) == mp_deg(f)) {
      MPoly b = mp_powmod(a, e, f, p);
      g = mp_gcd(mp_sub(b, MPoly{1}, p), f, p);
    }
    if (mp_deg(g) > 0 && mp_deg(g) < mp_deg(f)) {
      edf(g, d, p, rng, out);
      edf(mp_divmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

inline std::vector<MPoly> factor_mod_p(const MPoly& f_monic, u64 p, std::mt19937_64& rng) {
  std::vector<MPoly> out;
  for (auto& [g, d] : ddf(f_monic, p)) edf(g, d, p, rng, out);
  return out;
}

// ---- integer polynomial helpers modulo m -----------------------------------

inline ZPoly zmod(const ZPoly& a, const Integer& m) {
  std::vector<Integer> v;
  for (const Integer& c : a.coeffs()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    v.push_back(r);
  }
  return ZPoly(v);
}
inline ZPoly zsym(const ZPoly& a, const Integer& m) {
  Integer half = m / 2;
  std::vector<Integer> v;
  for (const Integer& c : a.coeffs()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (r > half) r -= m;
    v.push_back(r);
  }
  return ZPoly(v);
}
inline ZPoly from_mpoly(const MPoly& a) {
  std::vector<Integer> v;
  for (u64 c : a) v.emplace_back(static_cast<unsigned long>(c));
  return ZPoly(v);
}
/// Division by a monic b modulo m.
inline std::pair<ZPoly, ZPoly> zdivmod_monic(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.degree() < b.degree()) return {ZPoly(), zmod(a, m)};
  std::vector<Integer> r = zmod(a, m).coeffs();
  r.resize(static_cast<std::size_t>(a.degree()) + 1, Integer(0));
  std::vector<Integer> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Integer(0));
  const auto& bc = b.coeffs();
  for (int i = a.degree() - b.degree(); i >= 0; --i) {
    Integer c = r[static_cast<std::size_t>(i) + bc.size() - 1];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c == 0) continue;
    q[static_cast<std::size_t>(i)] = c;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      Integer& x = r[static_cast<std::size_t>(i) + j];
      x -= c * bc[j];
      mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    }
  }
  return {zmod(ZPoly(q), m), zmod(ZPoly(r), m)};
}

/// One quadratic Hensel step: f = g*h (mod m) and s*g + t*h = 1 (mod m),
/// h monic, become the same relations modulo m^2.
inline void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Integer& m) {
  Integer m2 = m * m;
  ZPoly e = zmod(f - g * h, m2);
  auto [q, r] = zdivmod_monic(zmod(s * e, m2), h, m2);
  ZPoly g2 = zmod(g + t * e + q * g, m2);
  ZPoly h2 = zmod(h + r, m2);
  ZPoly b = zmod(s * g2 + t * h2 - ZPoly(Integer(1)), m2);
  auto [c, d] = zdivmod_monic(zmod(s * b, m2), h2, m2);
  s = zmod(s - d, m2);
  t = zmod(t - t * b - c * g2, m2);
  g = std::move(g2);
  h = std::move(h2);
}

/// Exact division in Z[x]; returns false when b does not divide a.
inline bool zdiv_exact(const ZPoly& a, const ZPoly& b, ZPoly& quotient) {
  if (b.is_zero_poly()) return false;
  if (a.is_zero_poly()) {
    quotient = ZPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  std::vector<Integer> r = a.coeffs();
  std::vector<Integer> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Integer(0));
  const auto& bc = b.coeffs();
  for (int i = a.degree() - b.degree(); i >= 0; --i) {
    const Integer& top = r[static_cast<std::size_t>(i) + bc.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), bc.back().get_mpz_t())) return false;
    Integer c = top / bc.back();
    for (std::size_t j = 0; j < bc.size(); ++j) r[static_cast<std::size_t>(i) + j] -= c * bc[j];
    q[static_cast<std::size_t>(i)] = c;
  }
  for (const Integer& x : r)
    if (x != 0) return false;
  quotient = ZPoly(q);
  return true;
}

inline const std::vector<u64>& small_odd_primes() {
  static const std::vector<u64> primes = [] {
    std::vector<u64> v;
    for (u64 n = 3; v.size() < 400; n += 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) {
          prime = false;
          break;
        }
      if (prime) v.push_back(n);
    }
    return v;
  }();
  return primes;
}

/// Irreducible factors of a primitive squarefree f with positive leading
/// coefficient and degree >= 1.
inline std::vector<ZPoly> factor_squarefree_z(const ZPoly& f) {
  if (f.degree() <= 1) return {f};
  std::mt19937_64 rng(0x5eedULL + static_cast<u64>(f.degree()));

  // Choose a good prime; among the first few good ones keep the one with the
  // fewest modular factors.
  u64 best_p = 0;
  std::vector<MPoly> best;
  int good_seen = 0;
  for (u64 p : small_odd_primes()) {
    if (mpz_divisible_ui_p(f.lc().get_mpz_t(), p)) continue;
    MPoly fp = reduce_mod(f, p);
    MPoly dfp;
    for (std::size_t i = 1; i < fp.size(); ++i) dfp.push_back(mulmod(fp[i], i % p, p));
    mp_trim(dfp);
    if (mp_deg(mp_gcd(fp, dfp, p)) != 0) continue;
    std::vector<MPoly> fac = factor_mod_p(mp_monic(fp, p), p, rng);
    if (best_p == 0 || fac.size() < best.size()) {
      best_p = p;
      best = std::move(fac);
    }
    if (best.size() == 1 || ++good_seen >= 4) break;
  }
  if (best_p == 0) throw ResourceCapError("no suitable prime for factorization");
  if (best.size() == 1) return {f};

  const u64 p = best_p;
  const Integer P(static_cast<unsigned long>(p));
  // Coefficient bound for factors multiplied by lc(f).
  Integer norm2 = 0;
  for (const Integer& c : f.coeffs()) norm2 += c * c;
  Integer norm = sqrt(norm2) + 1;
  Integer bound = Integer(2) * abs(f.lc()) * norm;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(f.degree()));
  Integer M = P;
  int doublings = 0;
  while (M <= bound) {
    M = M * M;
    ++doublings;
  }

  // Lift the factorization one factor at a time.
  std::vector<ZPoly> lifted;
  ZPoly cur = f;
  for (std::size_t i = 0; i + 1 < best.size(); ++i) {
    MPoly lcp{mpz_fdiv_ui(cur.lc().get_mpz_t(), p)};
    MPoly g0 = mp_mul(lcp, best[i], p);
    MPoly h0{1};
    for (std::size_t j = i + 1; j < best.size(); ++j) h0 = mp_mul(h0, best[j], p);
    auto [s0, t0] = mp_bezout(g0, h0, p);
    ZPoly g = from_mpoly(g0), h = from_mpoly(h0), s = from_mpoly(s0), t = from_mpoly(t0);
    Integer m = P;
    for (int k = 0; k < doublings; ++k) {
      hensel_step(cur, g, h, s, t, m);
      m = m * m;
    }
    Integer inv;
    mpz_invert(inv.get_mpz_t(), g.lc().get_mpz_t(), M.get_mpz_t());
    lifted.push_back(zmod(inv * g, M));
    cur = h;
  }
  lifted.push_back(zmod(cur, M));

  // Recombination.
  std::vector<ZPoly> result;
  ZPoly rest = f;
  std::vector<ZPoly> pool = lifted;
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t k = 0; k < s; ++k) idx[k] = k;
    while (true) {
      ZPoly prod(rest.lc());
      for (std::size_t k : idx) prod = zmod(prod * pool[k], M);
      ZPoly cand = zsym(prod, M);
      Integer c = content(cand);
      if (c != 0) {
        std::vector<Integer> v;
        for (const Integer& a : cand.coeffs()) v.push_back(Integer(a / c));
        ZPoly g(v);
        if (sgn(g.lc()) < 0) g = -g;
        ZPoly q;
        if (zdiv_exact(rest, g, q)) {
          result.push_back(g);
          rest = q;
          std::vector<ZPoly> np;
          for (std::size_t k = 0; k < pool.size(); ++k)
            if (std::find(idx.begin(), idx.end(), k) == idx.end()) np.push_back(pool[k]);
          pool = std::move(np);
          found = true;
          break;
        }
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (rest.degree() >= 1) {
    if (sgn(rest.lc()) < 0) rest = -rest;
    result.push_back(rest);
  }
  return result;
}

}  // namespace detail

/// Squarefree decomposition (Yun): returns (g_i, i) with p = c * prod g_i^i,
/// every g_i monic, squarefree and pairwise coprime.
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& p) {
  std::vector<std::pair<QPoly, int>> out;
  if (p.degree() <= 0) return out;
  QPoly f = p.monic();
  QPoly df = f.derivative();
  QPoly a = gcd(f, df);
  QPoly b = f / a, c = df / a;
  QPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    QPoly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

struct QFactor {
  QPoly factor;  // monic irreducible
  int multiplicity;
};

/// Complete factorization over Q into monic irreducibles with multiplicity.
/// Factors are sorted by (degree, coefficient list) for determinism.
inline std::vector<QFactor> factor_over_q(const QPoly& p) {
  std::vector<QFactor> out;
  for (auto& [g, mult] : squarefree_decomposition(p)) {
    ZPoly z = primitive_integer(g);
    for (const ZPoly& h : detail::factor_squarefree_z(z)) out.push_back({to_qpoly(h).monic(), mult});
  }
  std::sort(out.begin(), out.end(), [](const QFactor& a, const QFactor& b) {
    if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
    const auto& x = a.factor.coeffs();
    const auto& y = b.factor.coeffs();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return x[i] < y[i];
    return false;
  });
  return out;
}

inline bool is_irreducible_over_q(const QPoly& p) {
  if (p.degree() <= 0) return false;
  auto f = factor_over_q(p);
  return f.size() == 1 && f[0].multiplicity == 1;
}

/// Distinct rational roots, ascending.
inline std::vector<Rational> rational_roots(const QPoly& p) {
  std::vector<Rational> out;
  if (p.is_zero_poly()) throw PreconditionError("rational roots of the zero polynomial");
  for (const QFactor& f : factor_over_q(p))
    if (f.factor.degree() == 1) out.push_back(Rational(-f.factor.coeff(0)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qth
