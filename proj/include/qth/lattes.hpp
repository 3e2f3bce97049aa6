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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/heights.hpp"
#include "qth/maps.hpp"
#include "qth/rational.hpp"

namespace qth {

/// The Legendre-family Lattes map f(z) = (z^2 - t)^2 / (4z(z - 1)(z - t)).
inline HomogPair lattes_map() { return parse_map("(z^2-t)^2/(4*z*(z-1)*(z-t))"); }

/// Position of v(f^n(a)) on the spine [zeta_0, zeta_1] of the Lattes map.
/// Above means v > 1 and Below means v < 0.
struct TentState {
  enum class Kind { Active, Above, Below };
  Kind kind = Kind::Active;
  Rational r;
  std::string branch;  // residue condition used when leaving r in {0, 1/2, 1}

  static TentState active(const Rational& r) {
    if (r < 0 || r > 1) throw PreconditionError("active tent radius must lie in [0, 1]");
    return {Kind::Active, r, {}};
  }
  static TentState above() { return {Kind::Above, Rational(0), {}}; }
  static TentState below() { return {Kind::Below, Rational(0), {}}; }
  /// State of a point with valuation r (nullopt is v = +infinity, i.e. a = 0).
  static TentState from_valuation(const std::optional<Rational>& r) {
    if (!r || *r > 1) return above();
    if (*r < 0) return below();
    return active(*r);
  }

  bool is_active() const { return kind == Kind::Active; }
  /// sigma-digit emitted in this state.
  Rational digit() const {
    switch (kind) {
      case Kind::Above: return Rational(2);
      case Kind::Below: return Rational(0);
      default: return 2 * r;
    }
  }
  bool needs_residue() const { return is_active() && (is_zero(r) || r == Rational(1, 2) || r == 1); }
  std::string str() const {
    switch (kind) {
      case Kind::Above: return "above";
      case Kind::Below: return "below";
      default: return to_string(r);
    }
  }
  friend bool operator==(const TentState& a, const TentState& b) { return a.kind == b.kind && (a.kind != Kind::Active || a.r == b.r); }
};

struct TentStep {
  TentState next;
  Rational digit;
};

/// One step of the tent dynamics. At r = 0 the residue is that of a, at
/// r = 1/2 that of a/t^(1/2) and at r = 1 that of a/t.
inline TentStep tent_step(const TentState& s, const std::optional<Rational>& residue = std::nullopt) {
  TentStep out{s, s.digit()};
  if (s.kind == TentState::Kind::Above || s.kind == TentState::Kind::Below) {
    out.next = TentState::below();
    return out;
  }
  if (s.needs_residue() && !residue) throw PreconditionError("tent_step at r = " + to_string(s.r) + " needs a residue");
  const Rational& r = s.r;
  if (is_zero(r)) {
    bool special = *residue == 1;
    out.next = special ? TentState::below() : TentState::active(Rational(0));
    out.next.branch = special ? "residue = 1" : "residue != 1";
  } else if (r == Rational(1, 2)) {
    bool special = *residue == 1 || *residue == -1;
    out.next = special ? TentState::above() : TentState::active(Rational(1));
    out.next.branch = special ? "residue = +-1" : "residue != +-1";
  } else if (r == 1) {
    bool special = *residue == 1;
    out.next = special ? TentState::below() : TentState::active(Rational(0));
    out.next.branch = special ? "residue = 1" : "residue != 1";
  } else if (r < Rational(1, 2)) {
    out.next = TentState::active(2 * r);
  } else {
    out.next = TentState::active(2 - 2 * r);
  }
  return out;
}

/// Residue choices at the branching radii, keyed by radius; nullptr means
/// generic residues (never the special values).
using TentOracle = std::function<Rational(const Rational& r)>;

struct TentOrbit {
  std::vector<TentState> states;  // states[0..preperiod+period)
  std::vector<Rational> digits;
  int preperiod = 0, period = 0;
  bool conditional = false;  // true when a user oracle chose a branch
  Rational eta;              // (1/4) sum digits_n / 4^n
};

/// Exact orbit of r0 under the tent dynamics until a state repeats.
inline TentOrbit tent_orbit(const Rational& r0, const TentOracle& oracle = nullptr) {
  if (r0 < 0 || r0 > 1) throw PreconditionError("tent_orbit needs r0 in [0, 1]");
  TentOrbit out;
  std::map<std::string, int> seen;
  TentState s = TentState::active(r0);
  for (;;) {
    std::string key = s.str();
    auto it = seen.find(key);
    if (it != seen.end()) {
      out.preperiod = it->second;
      out.period = static_cast<int>(out.states.size()) - it->second;
      break;
    }
    seen.emplace(key, static_cast<int>(out.states.size()));
    out.states.push_back(s);
    out.digits.push_back(s.digit());
    std::optional<Rational> res;
    if (s.needs_residue()) {
      if (oracle) {
        res = oracle(s.r);
        out.conditional = true;
      } else {
        res = Rational(2);  // generic: not 0, 1 or -1
      }
    }
    s = tent_step(s, res).next;
  }
  out.eta = rational_from_periodic_digits(out.digits, out.preperiod, out.period, 4);
  return out;
}

/// (preperiod, period) of num/den under the plain tent map, with the
/// denominator held fixed so that states are integers in [0, den].
inline std::pair<long, long> tent_cycle(long num, long den) {
  if (den <= 0 || num < 0 || num > den) throw PreconditionError("tent_cycle needs 0 <= num <= den");
  std::vector<long> first(static_cast<std::size_t>(den) + 1, -1);
  long n = num;
  for (long step = 0;; ++step) {
    long& f = first[static_cast<std::size_t>(n)];
    if (f >= 0) return {f, step - f};
    f = step;
    n = 2 * n <= den ? 2 * n : 2 * den - 2 * n;
  }
}

struct LattesHeight {
  Rational value;
  Rational eta;
  std::vector<TentState> states;
  std::vector<Rational> digits;
  int preperiod = 0, period = 1;
};

namespace detail {

/// Residue needed by tent_step for an actual point x in state s.
inline Rational lattes_residue(const TentState& s, const ProjPoint& x) {
  const FFElem& a = x.affine();
  Place p = Place::t();
  if (is_zero(s.r)) return residue(a, p).rational;
  return residue(a / FFElem(QPoly::x()), p).rational;  // r = 1
}

inline std::optional<Rational> lattes_valuation(const ProjPoint& x) {
  if (x.is_infinity()) return Rational(-1);
  ExtInt v = valuation(x.affine(), Place::t());
  if (v.is_inf()) return std::nullopt;
  return Rational(v.value());
}

}  // namespace detail

/// Exact local height at the place t of the Lattes map, driven by the tent
/// dynamics with residues read off the actual orbit.
inline LattesHeight lattes_local_height(const ProjPoint& a) {
  if (a.is_infinity()) throw PreconditionError("lattes_local_height is defined for a != infinity");
  HomogPair F = lattes_map();
  LattesHeight out;
  ProjPoint x = a;
  TentState s = TentState::from_valuation(detail::lattes_valuation(x));
  for (int guard = 0;; ++guard) {
    if (guard > 64) throw ResourceCapError("tent orbit did not settle");
    // from r <= 0 every later digit is 0 whichever branch is taken
    if (s.kind == TentState::Kind::Below || (s.is_active() && is_zero(s.r))) {
      out.states.push_back(s);
      out.digits.push_back(Rational(0));
      out.preperiod = static_cast<int>(out.digits.size()) - 1;
      out.period = 1;
      break;
    }
    auto it = std::find(out.states.begin(), out.states.end(), s);
    if (it != out.states.end()) {
      out.preperiod = static_cast<int>(it - out.states.begin());
      out.period = static_cast<int>(out.states.size()) - out.preperiod;
      break;
    }
    out.states.push_back(s);
    std::optional<Rational> res;
    if (s.needs_residue()) res = detail::lattes_residue(s, x);
    TentStep st = tent_step(s, res);
    out.digits.push_back(st.digit);
    s = st.next;
    x = apply_map(F, x);
    // the tent state must describe the genuine orbit
    if (s.is_active() && detail::lattes_valuation(x) != std::optional<Rational>(s.r)) {
      throw ResourceCapError("tent state " + s.str() + " disagrees with the orbit point " + x.str());
    }
  }
  out.eta = rational_from_periodic_digits(out.digits, out.preperiod, out.period, 4);
  ExtInt va = valuation(a.affine(), Place::t());
  out.value = -out.eta;
  if (!va.is_inf() && va.value() < 0) out.value -= va.value();
  return out;
}

/// Height of a point with v(a) = r0 in [0, 1] using branch choices from the
/// oracle (symbolic mode; the result is conditional on those choices).
inline LattesHeight lattes_symbolic_height(const Rational& r0, const TentOracle& oracle = nullptr) {
  TentOrbit o = tent_orbit(r0, oracle);
  LattesHeight out;
  out.states = o.states;
  out.digits = o.digits;
  out.preperiod = o.preperiod;
  out.period = o.period;
  out.eta = o.eta;
  out.value = -o.eta;
  return out;
}

/// First n tent digits along the actual orbit of a, with residues taken from
/// the orbit at every branching radius.
inline std::vector<Rational> lattes_digit_stream(const ProjPoint& a, int n) {
  HomogPair F = lattes_map();
  std::vector<Rational> out;
  ProjPoint x = a;
  for (int i = 0; i < n; ++i) {
    TentState s = TentState::from_valuation(detail::lattes_valuation(x));
    out.push_back(s.digit());
    if (i + 1 < n) x = apply_map(F, x);
  }
  return out;
}

}  // namespace qth
