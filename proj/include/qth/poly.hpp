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
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/rational.hpp"

namespace qth {

/// Dense univariate polynomial over a commutative ring F; c[i] is the
/// coefficient of x^i and there are never trailing zero coefficients.
/// Division-based operations (divmod, gcd) require F to be a field.
///
/// F must provide F(int), the ring operators and a free `is_zero(const F&)`.
template <class F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(F constant) {
    if (!is_zero(constant)) c_.push_back(std::move(constant));
  }
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(F a, std::size_t k) {
    if (is_zero(a)) return Poly();
    std::vector<F> v(k + 1, F(0));
    v[k] = std::move(a);
    return Poly(std::move(v));
  }
  static Poly x() { return monomial(F(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero_poly() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
  const F& lc() const {
    if (c_.empty()) throw PreconditionError("leading coefficient of the zero polynomial");
    return c_.back();
  }
  void set_coeff(std::size_t i, F a) {
    if (i >= c_.size()) c_.resize(i + 1, F(0));
    c_[i] = std::move(a);
    trim();
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<F> r;
    r.reserve(a.c_.size());
    for (const F& x : a.c_) r.push_back(-x);
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const F& s, const Poly& a) {
    if (is_zero(s)) return Poly();
    std::vector<F> r;
    r.reserve(a.c_.size());
    for (const F& x : a.c_) r.push_back(s * x);
    return Poly(std::move(r));
  }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly pow(unsigned long e) const {
    Poly result(F(1)), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Multiplication by x^k.
  Poly shift_up(std::size_t k) const {
    if (c_.empty()) return Poly();
    std::vector<F> r(k, F(0));
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(std::move(r));
  }

  /// Quotient and remainder; b must be nonzero and F a field.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.c_.empty()) throw PreconditionError("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<F> r = a.c_;
    std::vector<F> q(a.c_.size() - b.c_.size() + 1, F(0));
    const F inv_lc = F(1) / b.c_.back();
    for (int i = a.degree() - b.degree(); i >= 0; --i) {
      const F& top = r[static_cast<std::size_t>(i) + b.c_.size() - 1];
      if (is_zero(top)) continue;
      F coef = top * inv_lc;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[static_cast<std::size_t>(i) + j] = r[static_cast<std::size_t>(i) + j] - coef * b.c_[j];
      q[static_cast<std::size_t>(i)] = std::move(coef);
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  Poly monic() const {
    if (c_.empty()) return Poly();
    return (F(1) / c_.back()) * (*this);
  }

  /// Horner evaluation with the argument in any ring T that accepts F.
  template <class T>
  T eval_in(const T& x, const T& zero) const {
    T acc = zero;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + T(c_[i]);
    return acc;
  }
  F eval(const F& x) const {
    F acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(F(static_cast<long>(i)) * c_[i]);
    return Poly(std::move(r));
  }

  /// this(g(x)).
  Poly compose(const Poly& g) const {
    Poly acc;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + Poly(c_[i]);
    return acc;
  }

  /// this(x + a).
  Poly taylor_shift(const F& a) const { return compose(Poly(std::vector<F>{a, F(1)})); }

  /// x^deg * this(1/x) for a given formal degree (reversal of coefficients).
  Poly reversed(std::size_t formal_degree) const {
    std::vector<F> r(formal_degree + 1, F(0));
    for (std::size_t i = 0; i < c_.size() && i <= formal_degree; ++i) r[formal_degree - i] = c_[i];
    return Poly(std::move(r));
  }

  /// Largest k with x^k dividing this (0 for the zero polynomial).
  std::size_t low_order() const {
    std::size_t k = 0;
    while (k < c_.size() && is_zero(c_[k])) ++k;
    return c_.empty() ? 0 : k;
  }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

/// Monic gcd over a field (zero when both inputs vanish).
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero_poly()) {
    Poly<F> r = Poly<F>::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r0 = a, r1 = b, s0(F(1)), s1, t0, t1(F(1));
  while (!r1.is_zero_poly()) {
    auto [q, r] = Poly<F>::divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero_poly()) return {r0, s0, t0};
  F inv = F(1) / r0.lc();
  return {inv * r0, inv * s0, inv * t0};
}

using QPoly = Poly<Rational>;
using ZPoly = Poly<Integer>;

/// Printer in the variable `var`, e.g. "3*t^2 - 1/2*t + 4". The output is
/// accepted back by the expression parser.
inline std::string qpoly_to_string(const QPoly& p, const std::string& var = "t") {
  if (p.is_zero_poly()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const Rational& a = p.coeffs()[static_cast<std::size_t>(i)];
    if (is_zero(a)) continue;
    Rational mag = abs(a);
    bool neg = sgn(a) < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    if (i == 0) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + "*" + mono;
    }
  }
  return out;
}

/// Content and primitive part helpers for integer polynomials.
inline Integer content(const ZPoly& p) {
  Integer g = 0;
  for (const Integer& a : p.coeffs()) g = gcd(g, a);
  return g;
}

/// Primitive integer polynomial with positive leading coefficient that is a
/// rational multiple of p.
inline ZPoly primitive_integer(const QPoly& p) {
  if (p.is_zero_poly()) return ZPoly();
  Integer l = 1;
  for (const Rational& a : p.coeffs()) l = lcm(l, a.get_den());
  std::vector<Integer> v;
  for (const Rational& a : p.coeffs()) v.push_back(Integer(a.get_num() * (l / a.get_den())));
  ZPoly z(v);
  Integer c = content(z);
  if (sgn(z.lc()) < 0) c = -c;
  std::vector<Integer> w;
  for (const Integer& a : z.coeffs()) w.push_back(Integer(a / c));
  return ZPoly(w);
}

inline QPoly to_qpoly(const ZPoly& p) {
  std::vector<Rational> v;
  for (const Integer& a : p.coeffs()) v.emplace_back(a);
  return QPoly(v);
}

namespace detail {

inline const std::vector<unsigned long>& zg_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> v;
    Integer n(2147483647UL);
    while (v.size() < 4096) {
      if (mpz_probab_prime_p(n.get_mpz_t(), 25) > 0) v.push_back(n.get_ui());
      n -= 2;
    }
    return v;
  }();
  return primes;
}

inline std::vector<unsigned long> zg_reduce(const ZPoly& a, unsigned long p) {
  std::vector<unsigned long> v;
  for (const Integer& c : a.coeffs()) v.push_back(mpz_fdiv_ui(c.get_mpz_t(), p));
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

inline unsigned long zg_pow(unsigned long b, unsigned long e, unsigned long p) {
  unsigned long r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

/// Monic gcd over F_p (p < 2^31 so products fit in 64 bits).
inline std::vector<unsigned long> zg_gcd_mod(std::vector<unsigned long> a, std::vector<unsigned long> b, unsigned long p) {
  while (!b.empty()) {
    unsigned long inv = zg_pow(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      unsigned long q = a.back() * inv % p;
      std::size_t sh = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + sh] = (a[i + sh] + (p - q) * b[i]) % p;
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    unsigned long inv = zg_pow(a.back(), p - 2, p);
    for (auto& x : a) x = x * inv % p;
  }
  return a;
}

/// gcd of primitive integer polynomials by Chinese remaindering over many
/// word-sized primes, checked by exact division.
inline QPoly modular_gcd(const ZPoly& A, const ZPoly& B) {
  Integer gamma = gcd(A.lc(), B.lc());
  QPoly qa = to_qpoly(A), qb = to_qpoly(B);
  std::vector<Integer> acc;
  Integer M = 1;
  int best = std::min(A.degree(), B.degree()) + 1;
  std::vector<Integer> last_lift;
  for (unsigned long p : zg_primes()) {
    if (mpz_fdiv_ui(A.lc().get_mpz_t(), p) == 0 || mpz_fdiv_ui(B.lc().get_mpz_t(), p) == 0) continue;
    std::vector<unsigned long> g = zg_gcd_mod(zg_reduce(A, p), zg_reduce(B, p), p);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg == 0) return QPoly(Rational(1));
    if (dg > best) continue;
    unsigned long gm = mpz_fdiv_ui(gamma.get_mpz_t(), p);
    for (auto& x : g) x = x * gm % p;
    if (dg < best) {
      best = dg;
      acc.assign(g.size(), Integer(0));
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] = g[i];
      M = p;
      last_lift.clear();
      continue;
    }
    unsigned long minv = zg_pow(mpz_fdiv_ui(M.get_mpz_t(), p), p - 2, p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      unsigned long cur = mpz_fdiv_ui(acc[i].get_mpz_t(), p);
      unsigned long k = (g[i] + p - cur) % p * minv % p;
      acc[i] += M * k;
    }
    M *= p;
    std::vector<Integer> lift;
    Integer half = M / 2;
    for (const Integer& c : acc) lift.push_back(c > half ? Integer(c - M) : c);
    if (lift == last_lift) {
      QPoly cand = to_qpoly(primitive_integer(to_qpoly(ZPoly(lift))));
      if ((qa % cand).is_zero_poly() && (qb % cand).is_zero_poly()) return cand.monic();
    }
    last_lift = std::move(lift);
  }
  throw ResourceCapError("modular gcd ran out of primes");
}

}  // namespace detail

/// Monic gcd over Q; uses modular arithmetic instead of Euclid over Q.
inline QPoly gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero_poly()) return b.is_zero_poly() ? b : b.monic();
  if (b.is_zero_poly()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return QPoly(Rational(1));
  if (std::min(a.degree(), b.degree()) < 4) return gcd<Rational>(a, b);
  return detail::modular_gcd(primitive_integer(a), primitive_integer(b));
}

}  // namespace qth
