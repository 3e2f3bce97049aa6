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

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/maps.hpp"
#include "qth/rational.hpp"

namespace qth {

using BigFloat = boost::multiprecision::mpfr_float;

/// Sets the working float precision (in bits) for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(BigFloat::default_precision()) {
    BigFloat::default_precision(digits10_for(bits));
  }
  ~PrecisionScope() { BigFloat::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  static unsigned digits10_for(unsigned bits) { return std::max(20u, static_cast<unsigned>(bits * 0.30103) + 1); }

 private:
  unsigned saved_;
};

namespace detail {
// 256 bits unless a PrecisionScope says otherwise; Boost's own default is 20 digits.
inline const bool kDefaultPrecisionSet = (BigFloat::default_precision(PrecisionScope::digits10_for(256)), true);
}  // namespace detail

inline BigFloat to_bigfloat(const Rational& q) { return BigFloat(q.get_mpq_t()); }

/// Arbitrary-precision complex number.
struct BigComplex {
  BigFloat re{0}, im{0};

  BigComplex() = default;
  BigComplex(BigFloat r, BigFloat i = BigFloat(0)) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  BigComplex(int v) : re(v), im(0) {}   // NOLINT
  BigComplex(long v) : re(v), im(0) {}  // NOLINT
  explicit BigComplex(const Rational& q) : re(to_bigfloat(q)), im(0) {}

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.re * b.re + b.im * b.im;
    if (n == 0) throw PreconditionError("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  BigComplex& operator+=(const BigComplex& b) { return *this = *this + b; }
  BigComplex& operator-=(const BigComplex& b) { return *this = *this - b; }
  BigComplex& operator*=(const BigComplex& b) { return *this = *this * b; }

  BigFloat abs() const { return boost::multiprecision::hypot(re, im); }

  /// Principal square root (branch cut on the negative real axis).
  BigComplex sqrt() const {
    BigFloat r = abs();
    if (r == 0) return {};
    BigFloat a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(re)) / 2);
    if (re >= 0) return {a, im / (2 * a)};
    BigFloat b = im < 0 ? BigFloat(-a) : a;
    return {boost::multiprecision::abs(im) / (2 * a), b};
  }

  /// "(re+imi)", or "(re)" when the imaginary part is exactly zero, with
  /// `digits` significant digits in scientific notation.
  std::string str(int digits = 30) const {
    auto fmt = [digits](const BigFloat& x) { return x.str(digits, std::ios_base::scientific); };
    if (im == 0) return "(" + fmt(re) + ")";
    std::string i = fmt(im);
    if (i[0] != '-') i = "+" + i;
    return "(" + fmt(re) + i + "i)";
  }
};

/// Parses the "(re+imi)" form produced by BigComplex::str, or a bare real.
inline BigComplex parse_bigcomplex(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  if (s.empty()) throw ParseError("empty complex number", 0);
  if (s.back() != 'i') return BigComplex(BigFloat(s));
  // split at the sign that starts the imaginary part (not an exponent sign)
  for (std::size_t k = s.size() - 1; k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      try {
        return BigComplex(BigFloat(s.substr(0, k)), BigFloat(s.substr(k, s.size() - k - 1)));
      } catch (const std::exception&) {
        throw ParseError("malformed complex number '" + text + "'", k);
      }
    }
  }
  throw ParseError("malformed complex number '" + text + "'", 0);
}

/// Precision settings for series arithmetic.
struct PrecisionBudget {
  Rational cutoff{24};
  double tol = 1e-40;
  long ramification_bound = 65536;
  unsigned bits = 256;
};

/// A truncated Puiseux series sum c_i t^{e_i} + O(t^cutoff) in the local
/// uniformizer t of a place. Coefficients of magnitude <= tol are treated as 0.
class PuiseuxApprox {
 public:
  struct Term {
    Rational e;
    BigComplex c;
  };

  PuiseuxApprox() : cutoff_(24) {}
  PuiseuxApprox(std::vector<Term> terms, Rational cutoff, double tol = 1e-40, long ram = 65536)
      : terms_(std::move(terms)), cutoff_(std::move(cutoff)), tol_(tol), ram_(ram) {
    normalize();
  }

  static PuiseuxApprox zero(const Rational& cutoff, double tol = 1e-40) { return PuiseuxApprox({}, cutoff, tol); }
  static PuiseuxApprox constant(const BigComplex& c, const Rational& cutoff, double tol = 1e-40) {
    return PuiseuxApprox({{Rational(0), c}}, cutoff, tol);
  }
  static PuiseuxApprox monomial(const BigComplex& c, const Rational& e, const Rational& cutoff, double tol = 1e-40) {
    return PuiseuxApprox({{e, c}}, cutoff, tol);
  }

  const std::vector<Term>& terms() const { return terms_; }
  const Rational& cutoff() const { return cutoff_; }
  double tol() const { return tol_; }
  long ramification_bound() const { return ram_; }
  bool is_numerically_zero() const { return terms_.empty(); }

  /// Least exponent with a coefficient above tolerance; +inf when none.
  ExtRational pval() const {
    if (terms_.empty()) return ExtRational::infinity();
    return ExtRational(terms_.front().e);
  }
  /// Valuation used for precision bookkeeping: the cutoff for a numerical zero.
  Rational val_or_cutoff() const { return terms_.empty() ? cutoff_ : terms_.front().e; }

  const BigComplex& leading_coefficient() const {
    if (terms_.empty()) throw PreconditionError("leading coefficient of a numerically zero series");
    return terms_.front().c;
  }
  /// Coefficient of t^e (0 when absent).
  BigComplex coefficient(const Rational& e) const {
    for (const Term& t : terms_)
      if (t.e == e) return t.c;
    return {};
  }

  PuiseuxApprox with_cutoff(const Rational& c) const {
    PuiseuxApprox r = *this;
    if (c < r.cutoff_) r.cutoff_ = c;
    r.normalize();
    return r;
  }

  std::string str(int digits = 30) const {
    std::string out;
    for (const Term& t : terms_) {
      if (!out.empty()) out += " + ";
      out += t.c.str(digits) + "*t^(" + to_string(t.e) + ")";
    }
    if (!out.empty()) out += " + ";
    return out + "O(t^(" + to_string(cutoff_) + "))";
  }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.e < b.e; });
    std::vector<Term> out;
    for (Term& t : terms_) {
      if (t.e >= cutoff_) break;
      if (!out.empty() && out.back().e == t.e) {
        out.back().c += t.c;
      } else {
        out.push_back(std::move(t));
      }
    }
    BigFloat tol(tol_);
    std::vector<Term> kept;
    for (Term& t : out) {
      if (t.c.abs() <= tol) continue;
      if (t.e.get_den() > ram_) throw ResourceCapError("exponent denominator exceeds the ramification bound " + std::to_string(ram_));
      kept.push_back(std::move(t));
    }
    terms_ = std::move(kept);
  }

  std::vector<Term> terms_;
  Rational cutoff_;
  double tol_ = 1e-40;
  long ram_ = 65536;
};

/// Parses the canonical text form "c1*t^(e1) + ... + O(t^(E))".
inline PuiseuxApprox parse_puiseux(const std::string& text, double tol = 1e-40) {
  std::vector<PuiseuxApprox::Term> terms;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '+')) ++pos;
  };
  auto read_exponent = [&](std::size_t at) {
    // expects "t^(" rational ")"
    if (text.compare(at, 3, "t^(") != 0) throw ParseError("expected 't^('", at);
    std::size_t close = text.find(')', at + 3);
    if (close == std::string::npos) throw ParseError("unterminated exponent", at);
    Rational e = parse_rational(text.substr(at + 3, close - at - 3));
    pos = close + 1;
    return e;
  };
  for (;;) {
    skip();
    if (pos >= text.size()) throw ParseError("missing O(t^(E)) term", pos);
    if (text.compare(pos, 2, "O(") == 0) {
      Rational cutoff = read_exponent(pos + 2);
      if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')'", pos);
      return PuiseuxApprox(std::move(terms), cutoff, tol);
    }
    if (text[pos] != '(') throw ParseError("expected '(' to open a coefficient", pos);
    std::size_t close = text.find(')', pos);
    if (close == std::string::npos) throw ParseError("unterminated coefficient", pos);
    BigComplex c = parse_bigcomplex(text.substr(pos, close - pos + 1));
    pos = close + 1;
    if (pos >= text.size() || text[pos] != '*') throw ParseError("expected '*'", pos);
    Rational e = read_exponent(pos + 1);
    terms.push_back({e, c});
  }
}

inline PuiseuxApprox p_neg(const PuiseuxApprox& x) {
  auto terms = x.terms();
  for (auto& t : terms) t.c = -t.c;
  return PuiseuxApprox(std::move(terms), x.cutoff(), x.tol(), x.ramification_bound());
}

inline PuiseuxApprox p_add(const PuiseuxApprox& x, const PuiseuxApprox& y) {
  auto terms = x.terms();
  terms.insert(terms.end(), y.terms().begin(), y.terms().end());
  return PuiseuxApprox(std::move(terms), std::min(x.cutoff(), y.cutoff()), std::max(x.tol(), y.tol()),
                       std::min(x.ramification_bound(), y.ramification_bound()));
}

inline PuiseuxApprox p_sub(const PuiseuxApprox& x, const PuiseuxApprox& y) { return p_add(x, p_neg(y)); }

/// Product; known modulo t^min(cx + vy, cy + vx).
inline PuiseuxApprox p_mul(const PuiseuxApprox& x, const PuiseuxApprox& y) {
  Rational cut = std::min(Rational(x.cutoff() + y.val_or_cutoff()), Rational(y.cutoff() + x.val_or_cutoff()));
  std::vector<PuiseuxApprox::Term> terms;
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms()) {
      Rational e = a.e + b.e;
      if (e >= cut) break;
      terms.push_back({e, a.c * b.c});
    }
  }
  return PuiseuxApprox(std::move(terms), cut, std::max(x.tol(), y.tol()), std::min(x.ramification_bound(), y.ramification_bound()));
}

inline PuiseuxApprox p_scale(const PuiseuxApprox& x, const BigComplex& c) {
  auto terms = x.terms();
  for (auto& t : terms) t.c = t.c * c;
  return PuiseuxApprox(std::move(terms), x.cutoff(), x.tol(), x.ramification_bound());
}

/// Multiplication by t^e.
inline PuiseuxApprox p_shift(const PuiseuxApprox& x, const Rational& e) {
  auto terms = x.terms();
  for (auto& t : terms) t.e += e;
  return PuiseuxApprox(std::move(terms), x.cutoff() + e, x.tol(), x.ramification_bound());
}

namespace detail {

/// Splits x = c0 t^e0 (1 + r) with v(r) > 0; returns (c0, e0, r).
inline std::tuple<BigComplex, Rational, PuiseuxApprox> split_leading(const PuiseuxApprox& x, const char* op) {
  if (x.is_numerically_zero()) throw PreconditionError(std::string(op) + ": operand is numerically zero at its cutoff");
  BigComplex c0 = x.leading_coefficient();
  Rational e0 = x.terms().front().e;
  PuiseuxApprox u = p_shift(p_scale(x, BigComplex(1) / c0), -e0);
  PuiseuxApprox r = p_sub(u, PuiseuxApprox::constant(BigComplex(1), u.cutoff(), u.tol()));
  return {c0, e0, r};
}

/// Sum_k coef(k) r^k modulo t^cutoff(r) for v(r) > 0.
template <class CoefFn>
PuiseuxApprox power_series_in(const PuiseuxApprox& r, CoefFn coef) {
  Rational cut = r.cutoff();
  PuiseuxApprox acc = PuiseuxApprox::constant(coef(0), cut, r.tol());
  if (r.is_numerically_zero()) return acc;
  Rational m = r.terms().front().e;
  if (cut / m > 4096) throw ResourceCapError("series expansion needs more than 4096 powers; the leading exponent is too small for the cutoff");
  PuiseuxApprox pw = PuiseuxApprox::constant(BigComplex(1), cut, r.tol());
  for (long k = 1; Rational(k) * m < cut; ++k) {
    pw = p_mul(pw, r).with_cutoff(cut);
    acc = p_add(acc, p_scale(pw, coef(k)));
  }
  return acc.with_cutoff(cut);
}

}  // namespace detail

/// 1/y; known modulo t^(cy - 2 v(y)).
inline PuiseuxApprox p_inv(const PuiseuxApprox& y) {
  auto [c0, e0, r] = detail::split_leading(y, "p_div");
  PuiseuxApprox s = detail::power_series_in(r, [](long k) { return BigComplex(BigFloat(k % 2 == 0 ? 1 : -1)); });
  return p_shift(p_scale(s, BigComplex(1) / c0), -e0);
}

inline PuiseuxApprox p_div(const PuiseuxApprox& x, const PuiseuxApprox& y) { return p_mul(x, p_inv(y)); }

/// Principal square root: sqrt(c0) t^(e0/2) (1 + r)^(1/2) by the binomial series.
inline PuiseuxApprox p_sqrt(const PuiseuxApprox& x) {
  auto [c0, e0, r] = detail::split_leading(x, "p_sqrt");
  // binomial(1/2, k) by the recurrence b_k = b_{k-1} (1/2 - (k-1)) / k
  std::vector<Rational> b{Rational(1)};
  auto coef = [&b](long k) {
    while (static_cast<long>(b.size()) <= k) {
      long j = static_cast<long>(b.size());
      b.push_back(b.back() * (Rational(1, 2) - Rational(j - 1)) / Rational(j));
    }
    return BigComplex(b[static_cast<std::size_t>(k)]);
  };
  PuiseuxApprox s = detail::power_series_in(r, coef);
  return p_shift(p_scale(s, c0.sqrt()), e0 / 2);
}

/// x^n for n >= 0.
inline PuiseuxApprox p_pow(const PuiseuxApprox& x, unsigned n) {
  PuiseuxApprox r = PuiseuxApprox::constant(BigComplex(1), x.cutoff() + Rational(1000000), x.tol());
  for (unsigned i = 0; i < n; ++i) r = p_mul(r, x);
  return r;
}

/// Convenience view of the valuation for callers wanting the marker.
inline ExtRational pval(const PuiseuxApprox& x) { return x.pval(); }

/// Expansion of an exact element of Q(t) at a degree-one place or at
/// infinity, in the local uniformizer (t - c, resp. 1/t), to the cutoff.
inline PuiseuxApprox to_local_series(const FFElem& x, const Place& p, const Rational& cutoff, double tol = 1e-40) {
  if (x.is_zero()) return PuiseuxApprox::zero(cutoff, tol);
  QPoly num, den;
  long shift = 0;
  if (p.is_infinity()) {
    // t = 1/s: num(1/s)/den(1/s) = s^(deg den - deg num) rev(num)/rev(den)
    num = x.num().reversed(static_cast<std::size_t>(x.num().degree()));
    den = x.den().reversed(static_cast<std::size_t>(x.den().degree()));
    shift = x.den().degree() - x.num().degree();
  } else {
    if (p.degree() != 1) throw PreconditionError("series expansion is only available at degree-one places and at infinity");
    QPoly sh(std::vector<Rational>{p.root(), Rational(1)});
    num = x.num().compose(sh);
    den = x.den().compose(sh);
    long kn = static_cast<long>(num.low_order()), kd = static_cast<long>(den.low_order());
    shift = kn - kd;
    num = QPoly(std::vector<Rational>(num.coeffs().begin() + kn, num.coeffs().end()));
    den = QPoly(std::vector<Rational>(den.coeffs().begin() + kd, den.coeffs().end()));
  }
  Rational span = cutoff - Rational(shift);
  std::vector<PuiseuxApprox::Term> terms;
  if (span > 0) {
    // exact rational power-series division num/den with den(0) != 0
    std::size_t K = static_cast<std::size_t>(ceil_of(span).get_si());
    std::vector<Rational> q(K);
    Rational inv0 = 1 / den.coeff(0);
    for (std::size_t i = 0; i < K; ++i) {
      Rational acc = num.coeff(i);
      for (std::size_t j = 1; j <= i && j < den.size(); ++j) acc -= den.coeffs()[j] * q[i - j];
      q[i] = acc * inv0;
      if (!is_zero(q[i])) terms.push_back({Rational(static_cast<long>(i) + shift), BigComplex(q[i])});
    }
  }
  return PuiseuxApprox(std::move(terms), cutoff, tol);
}

namespace detail {

inline std::optional<Rational> determined_min(const PuiseuxApprox& X, const PuiseuxApprox& Y) {
  ExtRational vx = X.pval(), vy = Y.pval();
  Rational cx = X.cutoff(), cy = Y.cutoff();
  if (!vx.is_inf() && vx.value() < cy && (vy.is_inf() || vx <= vy)) return vx.value();
  if (!vy.is_inf() && vy.value() < cx && (vx.is_inf() || vy <= vx)) return vy.value();
  return std::nullopt;
}

}  // namespace detail

/// Evaluates sum_i c_i x^i by Horner's rule.
inline PuiseuxApprox p_poly_eval(const std::vector<PuiseuxApprox>& c, const PuiseuxApprox& x) {
  PuiseuxApprox acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = p_add(p_mul(acc, x), c[i]);
  return acc;
}

inline std::vector<PuiseuxApprox> p_poly_derivative(const std::vector<PuiseuxApprox>& c) {
  std::vector<PuiseuxApprox> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(p_scale(c[i], BigComplex(BigFloat(static_cast<long>(i)))));
  if (d.empty()) d.push_back(PuiseuxApprox::zero(c.front().cutoff(), c.front().tol()));
  return d;
}

/// Newton iteration for a root of G(x) = sum c_i x^i starting at `seed`.
/// The seed must satisfy v(G'(seed)) < v(G(seed)); the result agrees with
/// the seed in its leading terms and is known to the returned cutoff.
inline PuiseuxApprox newton_root(const std::vector<PuiseuxApprox>& G, const PuiseuxApprox& seed, int max_iter = 64) {
  std::vector<PuiseuxApprox> dG = p_poly_derivative(G);
  PuiseuxApprox x = seed;
  PuiseuxApprox gx = p_poly_eval(G, x);
  if (gx.is_numerically_zero()) return x.with_cutoff(gx.cutoff());
  PuiseuxApprox dx = p_poly_eval(dG, x);
  if (dx.is_numerically_zero() || !(dx.pval() < gx.pval()))
    throw NewtonError("Newton condition fails at the seed: v(G') = " + dx.pval().str() + ", v(G) = " + gx.pval().str());
  Rational vd = dx.terms().front().e;
  Rational last = gx.terms().front().e;
  int stalls = 0;
  for (int it = 0; it < max_iter; ++it) {
    x = p_sub(x, p_div(gx, dx));
    gx = p_poly_eval(G, x);
    if (gx.is_numerically_zero()) {
      Rational cut = std::min(x.cutoff(), Rational(gx.cutoff() - vd));
      return x.with_cutoff(cut);
    }
    Rational now = gx.terms().front().e;
    if (now <= last) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
    last = now;
    dx = p_poly_eval(dG, x);
    if (dx.is_numerically_zero() || dx.terms().front().e != vd) throw NewtonError("derivative valuation changed during Newton iteration");
  }
  throw NewtonError("Newton iteration stalled before reaching the cutoff (residual valuation " + to_string(last) + ")");
}

/// Solves f(x) = target near `seed` for the map F at a degree-one place or
/// infinity, where the coefficients of F are expanded to the budget cutoff.
inline PuiseuxApprox newton_lift(const HomogPair& F, const PuiseuxApprox& target, const PuiseuxApprox& seed, const Place& p,
                                 const PrecisionBudget& budget = {}) {
  std::vector<PuiseuxApprox> G;
  for (int i = 0; i <= F.d; ++i) {
    PuiseuxApprox pc = to_local_series(F.P[static_cast<std::size_t>(i)], p, budget.cutoff, budget.tol);
    PuiseuxApprox qc = to_local_series(F.Q[static_cast<std::size_t>(i)], p, budget.cutoff, budget.tol);
    G.push_back(p_sub(pc, p_mul(target, qc)));
  }
  while (G.size() > 1 && G.back().is_numerically_zero() && G.back().cutoff() >= budget.cutoff) G.pop_back();
  return newton_root(G, seed.with_cutoff(budget.cutoff));
}

}  // namespace qth
