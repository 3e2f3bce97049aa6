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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/poly.hpp"
#include "qth/rational.hpp"
#include "qth/zpoly_factor.hpp"

namespace qth {

/// Element of Q(t) stored as num/den with gcd(num, den) = 1 and den monic,
/// so structural equality is mathematical equality.
class FFElem {
 public:
  FFElem() : num_(), den_(Rational(1)) {}
  FFElem(long c) : num_(Rational(c)), den_(Rational(1)) {}                // NOLINT
  FFElem(const Rational& c) : num_(c), den_(Rational(1)) {}               // NOLINT
  explicit FFElem(QPoly num) : num_(std::move(num)), den_(Rational(1)) {}
  FFElem(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero_poly()) throw PreconditionError("division by the zero polynomial");
    canonicalize();
  }

  static FFElem t() { return FFElem(QPoly::x()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero_poly(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  /// The constant value; requires is_constant().
  Rational constant_value() const {
    if (!is_constant()) throw PreconditionError("element is not constant");
    return num_.coeff(0);
  }

  friend bool operator==(const FFElem& a, const FFElem& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const FFElem& a, const FFElem& b) { return !(a == b); }

  friend FFElem operator+(const FFElem& a, const FFElem& b) {
    if (a.den_ == b.den_) return FFElem(a.num_ + b.num_, a.den_);
    return FFElem(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend FFElem operator-(const FFElem& a) {
    FFElem r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }
  friend FFElem operator-(const FFElem& a, const FFElem& b) { return a + (-b); }
  friend FFElem operator*(const FFElem& a, const FFElem& b) {
    if (a.is_zero() || b.is_zero()) return FFElem();
    if (a.is_polynomial() && b.is_polynomial()) {
      FFElem r;
      r.num_ = a.num_ * b.num_;
      Rational s = a.den_.coeff(0) * b.den_.coeff(0);
      r.num_ = Rational(1 / s) * r.num_;
      return r;
    }
    return FFElem(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend FFElem operator/(const FFElem& a, const FFElem& b) {
    if (b.is_zero()) throw PreconditionError("division by zero in Q(t)");
    return FFElem(a.num_ * b.den_, a.den_ * b.num_);
  }
  FFElem& operator+=(const FFElem& b) { return *this = *this + b; }
  FFElem& operator-=(const FFElem& b) { return *this = *this - b; }
  FFElem& operator*=(const FFElem& b) { return *this = *this * b; }
  FFElem& operator/=(const FFElem& b) { return *this = *this / b; }

  FFElem inverse() const { return FFElem(1) / *this; }

  /// Integer powers, negative allowed for nonzero elements.
  FFElem pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FFElem r;
    r.num_ = num_.pow(static_cast<unsigned long>(e));
    r.den_ = den_.pow(static_cast<unsigned long>(e));
    return r;  // powers of coprime polynomials stay coprime, den stays monic
  }

  /// Substitution t -> g(t) for g in Q(t).
  FFElem substitute(const FFElem& g) const {
    auto ev = [&](const QPoly& p) {
      FFElem acc;
      for (std::size_t i = p.size(); i-- > 0;) acc = acc * g + FFElem(p.coeffs()[i]);
      return acc;
    };
    return ev(num_) / ev(den_);
  }

  /// Canonical text, parseable back by parse_ffelem.
  std::string str() const {
    if (den_.degree() == 0) return qpoly_to_string(num_);
    std::string n = qpoly_to_string(num_);
    bool atomic_num = n.find(' ') == std::string::npos && n.find('/') == std::string::npos && n[0] != '-';
    std::string d = qpoly_to_string(den_);
    bool atomic_den = d.find(' ') == std::string::npos && d.find('*') == std::string::npos;
    return (atomic_num ? n : "(" + n + ")") + "/" + (atomic_den ? d : "(" + d + ")");
  }

  /// Total degree deg(num) + deg(den); used for resource caps.
  int height_degree() const { return std::max(num_.degree(), 0) + den_.degree(); }

 private:
  void canonicalize() {
    if (num_.is_zero_poly()) {
      den_ = QPoly(Rational(1));
      return;
    }
    if (den_.degree() > 0) {
      QPoly g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
      }
    }
    Rational c = den_.lc();
    if (c != 1) {
      Rational inv = 1 / c;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  QPoly num_, den_;
};

inline bool is_zero(const FFElem& x) { return x.is_zero(); }
inline std::string to_string(const FFElem& x) { return x.str(); }

/// A place of Q(t): a monic irreducible pi in Q[t], or the degree valuation.
class Place {
 public:
  enum class Kind { Finite, Infinity };

  /// Place at a monic irreducible polynomial; irreducibility is checked.
  static Place finite(const QPoly& pi) {
    if (pi.degree() < 1) throw PreconditionError("place polynomial must have positive degree");
    QPoly m = pi.monic();
    if (!is_irreducible_over_q(m)) throw PreconditionError("place polynomial " + qpoly_to_string(m) + " is not irreducible over Q");
    return Place(Kind::Finite, m);
  }
  /// The degree-one place t = c.
  static Place at(const Rational& c) { return Place(Kind::Finite, QPoly(std::vector<Rational>{Rational(-c), Rational(1)})); }
  static Place t() { return at(Rational(0)); }
  static Place infinity() { return Place(Kind::Infinity, QPoly()); }

  Kind kind() const { return kind_; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  const QPoly& pi() const { return pi_; }
  int degree() const { return is_infinity() ? 1 : pi_.degree(); }
  /// For degree-one finite places t = c, returns c.
  Rational root() const {
    if (is_infinity() || pi_.degree() != 1) throw PreconditionError("place is not of the form t = c");
    return Rational(-pi_.coeff(0));
  }
  bool residue_field_is_q() const { return degree() == 1; }

  FFElem uniformizer() const {
    if (is_infinity()) return FFElem(QPoly(Rational(1)), QPoly::x());
    return FFElem(pi_);
  }

  std::string str() const { return is_infinity() ? "inf" : qpoly_to_string(pi_); }

  friend bool operator==(const Place& a, const Place& b) { return a.kind_ == b.kind_ && a.pi_ == b.pi_; }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  /// Deterministic order: finite places by (degree, coefficients), then infinity.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.is_infinity() != b.is_infinity()) return b.is_infinity();
    if (a.is_infinity()) return false;
    if (a.pi_.degree() != b.pi_.degree()) return a.pi_.degree() < b.pi_.degree();
    const auto& x = a.pi_.coeffs();
    const auto& y = b.pi_.coeffs();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return x[i] < y[i];
    return false;
  }

 private:
  Place(Kind k, QPoly pi) : kind_(k), pi_(std::move(pi)) {}
  Kind kind_;
  QPoly pi_;
};

/// Multiplicity of the irreducible pi in the nonzero polynomial p.
inline long multiplicity(QPoly p, const QPoly& pi) {
  long k = 0;
  for (;;) {
    auto [q, r] = QPoly::divmod(p, pi);
    if (!r.is_zero_poly()) return k;
    p = std::move(q);
    ++k;
  }
}

/// Order of vanishing of x at p; +infinity exactly for x = 0.
inline ExtInt valuation(const FFElem& x, const Place& p) {
  if (x.is_zero()) return ExtInt::infinity();
  if (p.is_infinity()) return ExtInt(static_cast<long>(x.den().degree() - x.num().degree()));
  return ExtInt(multiplicity(x.num(), p.pi()) - multiplicity(x.den(), p.pi()));
}

/// Valuation of a nonzero element as a plain integer.
inline long val(const FFElem& x, const Place& p) { return valuation(x, p).value(); }

/// Class of x in the residue field at a place, or the marker for infinity.
struct ResidueValue {
  bool at_infinity = false;
  Rational rational;  // residue field Q (degree-one places and infinity)
  QPoly cls;          // residue class mod pi for higher-degree places
  bool in_q = true;

  std::string str() const {
    if (at_infinity) return "inf";
    return in_q ? to_string(rational) : qpoly_to_string(cls) + " mod pi";
  }
  friend bool operator==(const ResidueValue& a, const ResidueValue& b) {
    return a.at_infinity == b.at_infinity && a.in_q == b.in_q && a.rational == b.rational && a.cls == b.cls;
  }
};

/// Inverse of a modulo the irreducible m in Q[t].
inline QPoly inverse_mod(const QPoly& a, const QPoly& m) {
  auto [g, s, t] = ext_gcd(a % m, m);
  (void)t;
  if (g.degree() != 0) throw PreconditionError("element is not invertible modulo the place");
  return s % m;
}

inline ResidueValue residue(const FFElem& x, const Place& p) {
  ResidueValue r;
  r.in_q = p.residue_field_is_q();
  ExtInt v = valuation(x, p);
  if (!v.is_inf() && v.value() < 0) {
    r.at_infinity = true;
    return r;
  }
  if (v.is_inf() || v.value() > 0) return r;  // residue 0
  if (p.is_infinity()) {
    r.rational = x.num().lc() / x.den().lc();
  } else if (p.degree() == 1) {
    Rational c = p.root();
    r.rational = x.num().eval(c) / x.den().eval(c);
  } else {
    r.cls = (x.num() * inverse_mod(x.den(), p.pi())) % p.pi();
  }
  return r;
}

/// Finite places dividing the numerator or denominator of x, sorted.
inline std::vector<Place> support_places(const FFElem& x) {
  std::vector<Place> out;
  auto add = [&](const QPoly& poly) {
    if (poly.degree() < 1) return;
    for (const QFactor& f : factor_over_q(poly)) {
      Place pl = Place::finite(f.factor);
      if (std::find(out.begin(), out.end(), pl) == out.end()) out.push_back(pl);
    }
  };
  add(x.num());
  add(x.den());
  std::sort(out.begin(), out.end());
  return out;
}

/// Degree-weighted sum of valuations over all places; always 0 for x != 0.
inline long product_formula_check(const FFElem& x) {
  if (x.is_zero()) throw PreconditionError("product formula needs a nonzero element");
  long total = 0;
  for (const Place& pl : support_places(x)) total += pl.degree() * val(x, pl);
  total += val(x, Place::infinity());
  return total;
}

}  // namespace qth

template <>
struct std::hash<qth::FFElem> {
  std::size_t operator()(const qth::FFElem& x) const noexcept { return std::hash<std::string>()(x.str()); }
};
