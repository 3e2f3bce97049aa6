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
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qth/errors.hpp"
#include "qth/rational.hpp"

namespace qth {

namespace detail {

inline std::map<long, long> factor_long(long n) {
  std::map<long, long> f;
  for (long p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  if (n > 1) ++f[n];
  return f;
}

/// Strips the primes in `ps` from x, returning their exponents; `rest` keeps
/// the cofactor.
inline std::map<long, long> strip_primes(mpz_class x, const std::vector<long>& ps, mpz_class& rest) {
  std::map<long, long> e;
  for (long p : ps) {
    mpz_class pp(p);
    while (x % pp == 0) {
      x /= pp;
      ++e[p];
    }
  }
  rest = x;
  return e;
}

inline Rational pow_rat(long b, long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(k));
  return Rational(r);
}

/// (g, x, y) with a x + b y = g.
inline std::tuple<long, long, long> ext_gcd(long a, long b) {
  if (b == 0) return {a, 1, 0};
  auto [g, x, y] = ext_gcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

}  // namespace detail

struct MultDependence {
  bool independent = true;
  long k = 0, l = 0;  // d^k = e^l when dependent, smallest positive pair
};

/// d and e are dependent iff their prime-exponent vectors are proportional.
inline MultDependence mult_independent(long d, long e) {
  if (d < 2 || e < 2) throw PreconditionError("degrees must be at least 2");
  auto fd = detail::factor_long(d), fe = detail::factor_long(e);
  MultDependence out;
  if (fd.size() != fe.size()) return out;
  long k = 0, l = 0;
  for (const auto& [p, a] : fd) {
    auto it = fe.find(p);
    if (it == fe.end()) return out;
    long b = it->second;
    long g = std::gcd(a, b);
    if (k == 0) {
      k = b / g;
      l = a / g;
    } else if (a * k != b * l) {
      return out;
    }
  }
  out.independent = false;
  out.k = k;
  out.l = l;
  return out;
}

/// Solutions (m0 + s dm, n0 + s dn), s >= 0, of d^m H1 = e^n H2 for
/// dependent degrees.
struct SolutionFamily {
  long m0 = 0, n0 = 0, dm = 0, dn = 0;
};

struct EqualSolutions {
  bool dependent = false;
  std::vector<std::pair<long, long>> solutions;  // independent case: at most one
  std::optional<SolutionFamily> family;          // dependent case, when non-empty
};

/// All (m, n) >= 0 with d^m H1 = e^n H2, by comparing prime exponents of
/// H2 / H1 against those of d and e.
inline EqualSolutions solve_equal(Rational H1, Rational H2, long d, long e) {
  H1.canonicalize();
  H2.canonicalize();
  if (sgn(H1) <= 0 || sgn(H2) <= 0) throw PreconditionError("heights must be positive");
  MultDependence dep = mult_independent(d, e);
  EqualSolutions out;
  out.dependent = !dep.independent;
  Rational R = H2 / H1;
  auto fd = detail::factor_long(d), fe = detail::factor_long(e);
  std::vector<long> ps;
  for (const auto& kv : fd) ps.push_back(kv.first);
  for (const auto& kv : fe)
    if (!fd.count(kv.first)) ps.push_back(kv.first);
  mpz_class rn, rd;
  auto en = detail::strip_primes(R.get_num(), ps, rn);
  auto ed = detail::strip_primes(R.get_den(), ps, rd);
  if (rn != 1 || rd != 1) return out;
  // m v_p(d) - n v_p(e) = v_p(R) for every p
  auto vd = [&](long p) { return fd.count(p) ? fd.at(p) : 0L; };
  auto ve = [&](long p) { return fe.count(p) ? fe.at(p) : 0L; };
  auto vr = [&](long p) { return (en.count(p) ? en.at(p) : 0L) - (ed.count(p) ? ed.at(p) : 0L); };
  auto satisfies = [&](long m, long n) {
    return std::all_of(ps.begin(), ps.end(), [&](long p) { return m * vd(p) - n * ve(p) == vr(p); });
  };
  if (dep.independent) {
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        long a = vd(ps[i]), b = -ve(ps[i]), c = vd(ps[j]), dd = -ve(ps[j]);
        long det = a * dd - b * c;
        if (det == 0) continue;
        long mn = vr(ps[i]) * dd - b * vr(ps[j]), nn = a * vr(ps[j]) - c * vr(ps[i]);
        if (mn % det != 0 || nn % det != 0) return out;
        long m = mn / det, n = nn / det;
        if (m >= 0 && n >= 0 && satisfies(m, n)) out.solutions.push_back({m, n});
        return out;
      }
    return out;  // unreachable for independent degrees
  }
  // d = r^a, e = r^b: a m - b n = c with r^c = R
  long p0 = ps.front();
  long a = dep.l, b = dep.k;  // d^k = e^l, so v(d) : v(e) = l : k
  long unit = vd(p0) / a;     // exponent of p0 in r
  if (vr(p0) % unit != 0) return out;
  long c = vr(p0) / unit;
  auto [g, x, y] = detail::ext_gcd(a, b);
  if (c % g != 0) return out;
  // a (x c/g) + b (y c/g) = c, so m = x c/g, n = -y c/g solves a m - b n = c
  long m = x * (c / g), n = -y * (c / g);
  long dm = b / g, dn = a / g;
  // shift to the smallest m >= 0 with n >= 0
  long s = 0;
  if (m < 0) s = (-m + dm - 1) / dm;
  if (n + s * dn < 0) s = std::max(s, (-n + dn - 1) / dn);
  m += s * dm;
  n += s * dn;
  long back = std::min(m / dm, n / dn);
  m -= back * dm;
  n -= back * dn;
  if (!satisfies(m, n)) return out;
  out.family = SolutionFamily{m, n, dm, dn};
  return out;
}

struct IntersectionInstance {
  Rational H1{1}, H2{1};
  long d = 2, e = 3;
  Rational C{0};
};

struct IntersectionResult {
  std::vector<std::pair<long, long>> solutions;  // sorted by (m, n)
  std::vector<Rational> attained;                // the finite set of values d^m H1 - e^n H2
  long m_bound = 0, n_bound = 0;                 // no solutions with m > m_bound or n > n_bound
  bool rigorous = false;
  std::string bound_kind;
};

/// All (m, n) >= 0 with |d^m H1 - e^n H2| <= C. When gcd(d, e) = g > 1 the
/// bound is proved: g^min(m,n) divides the scaled difference, so beyond
/// g^k > C only equality survives. Coprime degrees need linear forms in
/// logarithms for a bound, so there the search stops at `horizon`.
inline IntersectionResult bounded_intersections(IntersectionInstance in, long horizon = 64) {
  in.H1.canonicalize();
  in.H2.canonicalize();
  in.C.canonicalize();
  if (sgn(in.H1) <= 0 || sgn(in.H2) <= 0) throw PreconditionError("heights must be positive");
  if (in.d < 2 || in.e < 2) throw PreconditionError("degrees must be at least 2");
  if (sgn(in.C) < 0) throw PreconditionError("C must be nonnegative");
  if (!mult_independent(in.d, in.e).independent)
    throw PreconditionError("degrees are multiplicatively dependent; use solve_equal for the solution family");
  IntersectionResult out;
  long g = std::gcd(in.d, in.e);
  long M = horizon;
  if (g > 1) {
    // scale to integers A, B and bound C' = C * den(H1) * den(H2)
    Rational s = Rational(in.H1.get_den() * in.H2.get_den());
    Rational A = in.H1 * s, B = in.H2 * s, Cs = in.C * s;
    long k0 = 0;
    while (detail::pow_rat(g, k0) <= Cs) ++k0;
    // min(m, n) < k0: if n < k0 then d^m A <= e^(k0-1) B + C'
    Rational capm = detail::pow_rat(in.e, std::max(k0 - 1, 0L)) * B + Cs;
    long m1 = 0;
    while (detail::pow_rat(in.d, m1 + 1) * A <= capm) ++m1;
    Rational capn = detail::pow_rat(in.d, std::max(k0 - 1, 0L)) * A + Cs;
    long n1 = 0;
    while (detail::pow_rat(in.e, n1 + 1) * B <= capn) ++n1;
    M = std::max(k0 - 1, m1);
    out.n_bound = std::max(k0 - 1, n1);
    out.rigorous = true;
    out.bound_kind = "gcd-divisibility";
  } else {
    out.bound_kind = "search-horizon";
  }
  long nmax = 0;
  for (long m = 0; m <= M; ++m) {
    Rational X = detail::pow_rat(in.d, m) * in.H1;
    Rational Y = in.H2;
    for (long n = 0; Y <= X + in.C; ++n, Y *= in.e) {
      Rational diff = X - Y;
      if (abs(diff) <= in.C) {
        out.solutions.push_back({m, n});
        out.attained.push_back(diff);
        nmax = std::max(nmax, n);
      }
    }
  }
  if (out.rigorous) {
    EqualSolutions eq = solve_equal(in.H1, in.H2, in.d, in.e);
    for (const auto& s : eq.solutions)
      if (s.first > M) {
        out.solutions.push_back(s);
        out.attained.push_back(Rational(0));
      }
    for (const auto& s : out.solutions) {
      out.m_bound = std::max(out.m_bound, s.first);
      out.n_bound = std::max(out.n_bound, s.second);
    }
    out.m_bound = std::max(out.m_bound, M);
  } else {
    out.m_bound = M;
    Rational top = detail::pow_rat(in.d, M) * in.H1 + in.C;
    long n = 0;
    for (Rational Y = in.H2; Y * in.e <= top; Y *= in.e) ++n;
    out.n_bound = std::max(n, nmax);
  }
  std::vector<std::size_t> idx(out.solutions.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out.solutions[a] < out.solutions[b]; });
  std::vector<std::pair<long, long>> sol;
  std::vector<Rational> att;
  for (std::size_t i : idx) {
    sol.push_back(out.solutions[i]);
    att.push_back(out.attained[i]);
  }
  out.solutions = std::move(sol);
  std::sort(att.begin(), att.end());
  att.erase(std::unique(att.begin(), att.end()), att.end());
  out.attained = std::move(att);
  return out;
}

}  // namespace qth
