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

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "qth/errors.hpp"

namespace qth {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

/// Canonical n/d for machine integers (d != 0).
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(const Integer& x) { return x.get_str(); }

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&](std::size_t pos) { return ParseError("malformed rational '" + s + "'", pos); };
  if (s.empty()) throw bad(0);
  std::size_t slash = s.find('/');
  auto check_int = [&](std::size_t from, std::size_t to) {
    std::size_t i = from;
    if (i < to && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == to) throw bad(i);
    for (; i < to; ++i)
      if (s[i] < '0' || s[i] > '9') throw bad(i);
  };
  if (slash == std::string::npos) {
    check_int(0, s.size());
    std::string body = s[0] == '+' ? s.substr(1) : s;
    return Rational(Integer(body));
  }
  check_int(0, slash);
  check_int(slash + 1, s.size());
  std::string n = s.substr(0, slash), d = s.substr(slash + 1);
  if (n[0] == '+') n.erase(0, 1);
  if (d[0] == '+') d.erase(0, 1);
  Integer den(d);
  if (den == 0) throw ParseError("zero denominator in '" + s + "'", slash + 1);
  Rational r(Integer(n), den);
  r.canonicalize();
  return r;
}

inline Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Rational rat_pow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

/// A value of T extended by +infinity; used for valuations where v(0) = +inf.
template <class T>
class Ext {
 public:
  Ext() : inf_(true), v_() {}
  Ext(T v) : inf_(false), v_(std::move(v)) {}  // NOLINT: implicit on purpose
  static Ext infinity() { return Ext(); }

  bool is_inf() const { return inf_; }
  const T& value() const {
    if (inf_) throw PreconditionError("value() of +infinity");
    return v_;
  }

  friend Ext operator+(const Ext& a, const Ext& b) {
    if (a.inf_ || b.inf_) return Ext();
    return Ext(T(a.v_ + b.v_));
  }
  friend bool operator==(const Ext& a, const Ext& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }
  friend bool operator<(const Ext& a, const Ext& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator>(const Ext& a, const Ext& b) { return b < a; }
  friend bool operator<=(const Ext& a, const Ext& b) { return !(b < a); }
  friend bool operator>=(const Ext& a, const Ext& b) { return !(a < b); }
  friend Ext min(const Ext& a, const Ext& b) { return b < a ? b : a; }
  friend Ext max(const Ext& a, const Ext& b) { return a < b ? b : a; }

  std::string str() const {
    if (inf_) return "inf";
    if constexpr (std::is_same_v<T, Rational>) {
      return qth::to_string(v_);
    } else {
      return std::to_string(v_);
    }
  }

 private:
  bool inf_;
  T v_;
};

using ExtInt = Ext<long>;
using ExtRational = Ext<Rational>;

inline ExtRational to_ext_rational(const ExtInt& x) {
  if (x.is_inf()) return ExtRational::infinity();
  return ExtRational(Rational(x.value()));
}

}  // namespace qth
