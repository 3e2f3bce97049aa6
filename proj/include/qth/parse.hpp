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

#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/poly.hpp"
#include "qth/zt_poly.hpp"

namespace qth {

/// A rational function num/den in z over Q(t).
struct ZtRatFun {
  ZtPoly num;
  ZtPoly den{FFElem(1)};
};

namespace detail {

inline constexpr unsigned long kMaxParseExponent = 4096;

/// Recursive-descent parser over the grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' nonneg-int)?
///   base   := integer | variable | '(' expr ')'
/// A leading unary sign is accepted so that "-t" and "-(z+1)" parse. `Ops`
/// supplies constants, variables and the field operations.
template <class Ops>
class ExprParser {
 public:
  using Value = typename Ops::Value;

  ExprParser(std::string_view text, const Ops& ops) : s_(text), ops_(ops) {}

  Value parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Value v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    Value v = term();
    if (neg) v = ops_.neg(v);
    for (;;) {
      if (accept('+')) {
        v = ops_.add(v, term());
      } else if (accept('-')) {
        v = ops_.sub(v, term());
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = factor();
    for (;;) {
      if (accept('*')) {
        v = ops_.mul(v, factor());
      } else if (accept('/')) {
        std::size_t at = pos_;
        Value d = factor();
        if (ops_.is_zero(d)) throw ParseError("division by the zero polynomial", at);
        v = ops_.div(v, d);
      } else {
        return v;
      }
    }
  }

  Value factor() {
    Value b = base();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected a nonnegative integer exponent", start);
      std::string digits(s_.substr(start, pos_ - start));
      if (digits.size() > 6 || std::stoul(digits) > kMaxParseExponent)
        throw ResourceCapError("exponent " + digits + " exceeds the parser cap of " + std::to_string(kMaxParseExponent));
      b = ops_.pow(b, std::stoul(digits));
    }
    return b;
  }

  Value base() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return ops_.constant(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      Value v;
      if (!ops_.variable(name, v)) throw ParseError("unknown variable '" + name + "'", start);
      return v;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view s_;
  const Ops& ops_;
  std::size_t pos_ = 0;
};

struct FFElemOps {
  using Value = FFElem;
  Value constant(const Rational& c) const { return FFElem(c); }
  bool variable(const std::string& name, Value& out) const {
    if (name != "t") return false;
    out = FFElem::t();
    return true;
  }
  Value neg(const Value& a) const { return -a; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value div(const Value& a, const Value& b) const { return a / b; }
  Value pow(const Value& a, unsigned long e) const { return a.pow(static_cast<long>(e)); }
  bool is_zero(const Value& a) const { return a.is_zero(); }
};

/// Reduces num/den by their gcd in Q(t)[z] and makes den monic.
inline ZtRatFun reduce_ratfun(ZtPoly num, ZtPoly den) {
  if (num.is_zero_poly()) return ZtRatFun{ZtPoly(), ZtPoly(FFElem(1))};
  ZtPoly g = zt_gcd(num, den);
  if (g.degree() > 0) {
    num = num / g;
    den = den / g;
  }
  FFElem inv = FFElem(1) / den.lc();
  return ZtRatFun{inv * num, inv * den};
}

struct ZtRatFunOps {
  using Value = ZtRatFun;
  Value constant(const Rational& c) const { return ZtRatFun{ZtPoly(FFElem(c)), ZtPoly(FFElem(1))}; }
  bool variable(const std::string& name, Value& out) const {
    if (name == "t") {
      out = ZtRatFun{ZtPoly(FFElem::t()), ZtPoly(FFElem(1))};
      return true;
    }
    if (name == "z") {
      out = ZtRatFun{ZtPoly::x(), ZtPoly(FFElem(1))};
      return true;
    }
    return false;
  }
  Value neg(const Value& a) const { return ZtRatFun{-a.num, a.den}; }
  Value add(const Value& a, const Value& b) const {
    if (a.den == b.den) return reduce_ratfun(a.num + b.num, a.den);
    return reduce_ratfun(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }
  Value mul(const Value& a, const Value& b) const { return reduce_ratfun(a.num * b.num, a.den * b.den); }
  Value div(const Value& a, const Value& b) const { return reduce_ratfun(a.num * b.den, a.den * b.num); }
  Value pow(const Value& a, unsigned long e) const { return ZtRatFun{a.num.pow(e), a.den.pow(e)}; }
  bool is_zero(const Value& a) const { return a.num.is_zero_poly(); }
};

}  // namespace detail

/// Parses an element of Q(t), e.g. "t^2/(1-t)".
inline FFElem parse_ffelem(std::string_view text) {
  detail::FFElemOps ops;
  return detail::ExprParser<detail::FFElemOps>(text, ops).parse();
}

/// Parses a rational function in z with coefficients in Q(t), e.g.
/// "(z+1)*(z-t)/(z+t)"; the result is in lowest terms with monic denominator.
inline ZtRatFun parse_zt_ratfun(std::string_view text) {
  detail::ZtRatFunOps ops;
  return detail::ExprParser<detail::ZtRatFunOps>(text, ops).parse();
}

/// Parses a place: "inf"/"infinity", or a polynomial in t that is made monic
/// and must be irreducible over Q.
inline Place parse_place(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "infinity" || s == "oo") return Place::infinity();
  FFElem e = parse_ffelem(s);
  if (!e.is_polynomial() || e.num().degree() < 1) throw PreconditionError("place must be 'inf' or a nonconstant polynomial in t, got '" + s + "'");
  return Place::finite(e.num());
}

}  // namespace qth
