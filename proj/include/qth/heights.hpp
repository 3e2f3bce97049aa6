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

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/maps.hpp"
#include "qth/rational.hpp"
#include "qth/zpoly_factor.hpp"

namespace qth {

/// Closed rational interval [lo, hi].
struct Enclosure {
  Rational lo, hi;

  static Enclosure point(const Rational& x) { return {x, x}; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Enclosure& o) const { return lo <= o.lo && o.hi <= hi; }
  std::string str() const { return "[" + to_string(lo) + ", " + to_string(hi) + "]"; }

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend Enclosure operator*(const Rational& k, const Enclosure& a) {
    return sgn(k) >= 0 ? Enclosure{k * a.lo, k * a.hi} : Enclosure{k * a.hi, k * a.lo};
  }
};

/// Why the value of a local height is known exactly (or that it is not).
struct Certificate {
  enum class Kind { ExactPreperiodic, ZeroTail, EnclosureOnly };
  Kind kind = Kind::EnclosureOnly;
  int preperiod = 0, period = 0;  // ExactPreperiodic
  Rational eta;                   // exact eta when certified
  int n0 = 0;                     // ZeroTail: sigma_n = 0 for n >= n0
  std::string reason;             // ZeroTail: affine-residue-escape | good-direction-absorption
  std::string detail;             // human-readable justification

  std::string kind_name() const {
    switch (kind) {
      case Kind::ExactPreperiodic: return "ExactPreperiodic";
      case Kind::ZeroTail: return "ZeroTail";
      default: return "EnclosureOnly";
    }
  }
};

struct LocalHeightResult {
  bool exact = false;
  Rational value;        // when exact
  Enclosure enclosure;   // always set; a point interval when exact
  Certificate certificate;
  std::vector<long> digits;
  Place place = Place::t();
  FFElem normalization_scalar{1};
};

struct EtaEnclosure {
  Enclosure eta;
  std::vector<long> digits;
};

/// Options of the certificate search.
struct HeightOptions {
  int max_iter = 24;      // exact orbit steps searched for repetition
  int depth = 20;         // digits used for enclosures
  int degree_cap = 192;   // total t-degree allowed for exact orbit points
  int residue_steps = 256;
};

/// (1/d) sum_n sigma_n / d^n for digits that are periodic after `preperiod`.
inline Rational rational_from_periodic_digits(const std::vector<Rational>& digits, int preperiod, int period, int d) {
  if (period < 1) throw PreconditionError("period must be at least 1");
  if (static_cast<int>(digits.size()) < preperiod + period) throw PreconditionError("not enough digits for the stated preperiod and period");
  Rational D(d), acc(0), w(1, d);
  for (int n = 0; n < preperiod; ++n) {
    acc += digits[static_cast<std::size_t>(n)] * w;
    w /= D;
  }
  Rational cyc(0), wc = w;
  for (int k = 0; k < period; ++k) {
    cyc += digits[static_cast<std::size_t>(preperiod + k)] * wc;
    wc /= D;
  }
  Rational dp = rat_pow(D, static_cast<unsigned long>(period));
  return acc + cyc * dp / (dp - 1);
}

inline Rational rational_from_periodic_digits(const std::vector<long>& digits, int preperiod, int period, int d) {
  std::vector<Rational> q(digits.begin(), digits.end());
  return rational_from_periodic_digits(q, preperiod, period, d);
}

/// Exact lambda shift -v(s)/(d-1) caused by replacing (P, Q) with (sP, sQ).
inline Rational scaling_shift(const HomogPair& F, const FFElem& s, const Place& p) {
  if (s.is_zero()) throw PreconditionError("scaling by zero");
  return ratio(-val(s, p), F.d - 1);
}

namespace detail {

/// Orbit of a with structural repetition detection.
struct OrbitScan {
  std::vector<ProjPoint> points;
  int repeat_from = -1;  // index the last point repeats, or -1
  bool capped = false;
};

inline OrbitScan scan_orbit(const HomogPair& F, const ProjPoint& a, int steps, int degree_cap, std::size_t size_cap = 1u << 15) {
  OrbitScan s;
  std::size_t last_size = a.str().size();
  std::unordered_map<std::string, int> seen;
  s.points.push_back(a);
  seen.emplace(a.str(), 0);
  for (int i = 0; i < steps; ++i) {
    ProjPoint nx;
    const ProjPoint& cur = s.points.back();
    if (!cur.is_infinity() && (F.d * cur.affine().height_degree() > 2 * degree_cap || last_size * F.d > size_cap)) {
      s.capped = true;
      break;
    }
    try {
      nx = apply_map(F, s.points.back());
    } catch (const ResourceCapError&) {
      s.capped = true;
      break;
    }
    if (!nx.is_infinity() && nx.affine().height_degree() > degree_cap) {
      s.capped = true;
      break;
    }
    std::string key = nx.str();
    last_size = key.size();
    auto it = seen.find(key);
    s.points.push_back(nx);
    if (it != seen.end()) {
      s.repeat_from = it->second;
      break;
    }
    seen.emplace(std::move(key), static_cast<int>(s.points.size()) - 1);
  }
  return s;
}

/// Reduction of a normalized presentation at a place with residue field Q.
struct Reduction {
  QPoly P, Q;  // dehomogenized, formal degree d
  int d = 1;

  /// True when (P, Q) vanish together at the residue r (r = nullopt is infinity).
  bool bad(const std::optional<Rational>& r) const {
    if (!r) return P.degree() < d && Q.degree() < d;
    return is_zero(P.eval(*r)) && is_zero(Q.eval(*r));
  }
  /// Reduced map at a residue outside the bad set.
  std::optional<Rational> apply(const std::optional<Rational>& r) const {
    Rational x, y;
    if (!r) {
      x = P.coeff(static_cast<std::size_t>(d));
      y = Q.coeff(static_cast<std::size_t>(d));
    } else {
      x = P.eval(*r);
      y = Q.eval(*r);
    }
    if (is_zero(y)) return std::nullopt;
    return x / y;
  }
};

inline Reduction reduce_presentation(const HomogPair& Fn, const Place& p) {
  std::vector<Rational> a, b;
  for (int i = 0; i <= Fn.d; ++i) {
    a.push_back(residue(Fn.P[static_cast<std::size_t>(i)], p).rational);
    b.push_back(residue(Fn.Q[static_cast<std::size_t>(i)], p).rational);
  }
  return Reduction{QPoly(a), QPoly(b), Fn.d};
}

inline std::optional<Rational> residue_q(const ProjPoint& x, const Place& p) {
  if (x.is_infinity()) return std::nullopt;
  ResidueValue r = residue(x.affine(), p);
  if (r.at_infinity) return std::nullopt;
  return r.rational;
}

inline std::string residue_str(const std::optional<Rational>& r) { return r ? to_string(*r) : std::string("inf"); }

/// Height max(|num|, |den|) of a rational.
inline Integer rat_height(const Rational& q) {
  Integer a = abs(q.get_num()), b = q.get_den();
  return a > b ? a : b;
}

/// Decides whether the residue orbit of r0 under the reduced map avoids the
/// bad set forever. Returns the reason when it provably does.
inline std::optional<std::pair<std::string, std::string>> residue_orbit_avoids(const Reduction& R, std::optional<Rational> r0, int steps) {
  if (R.bad(r0)) return std::nullopt;
  // cancel the common factor to read off an affine reduced map
  QPoly g = (R.P.is_zero_poly() || R.Q.is_zero_poly()) ? QPoly(Rational(1)) : gcd(R.P, R.Q);
  QPoly p1 = R.P.is_zero_poly() ? R.P : R.P / g, q1 = R.Q / g;
  int wp = R.d - (R.P.is_zero_poly() ? -1 : R.P.degree()), wq = R.d - R.Q.degree();
  int wcommon = std::min(wp, wq);
  int reduced_degree = R.d - g.degree() - wcommon;
  std::vector<Rational> bad_finite;
  if (!R.P.is_zero_poly() && !R.Q.is_zero_poly()) bad_finite = rational_roots(gcd(R.P, R.Q));
  bool inf_bad = R.bad(std::nullopt);
  if (reduced_degree == 1 && q1.degree() == 0 && p1.degree() == 1 && r0 && !inf_bad) {
    Rational lam = p1.coeff(1) / q1.coeff(0), c = p1.coeff(0) / q1.coeff(0);
    const Rational& x0 = *r0;
    std::string form = "reduction z -> " + to_string(lam) + "*z + " + to_string(c);
    if (lam == 1) {
      if (is_zero(c)) {
        return std::make_pair(std::string("affine-residue-escape"), form + "; residue fixed at " + to_string(x0));
      }
      for (const Rational& b : bad_finite) {
        Rational n = (b - x0) / c;
        if (n.get_den() == 1 && sgn(n) >= 0) return std::nullopt;
      }
      return std::make_pair(std::string("affine-residue-escape"),
                            form + "; residue orbit " + to_string(x0) + " + n*" + to_string(c) + " never meets the bad set");
    }
    Rational zs = c / (1 - lam);
    Rational base = x0 - zs;
    for (const Rational& b : bad_finite) {
      if (is_zero(base)) {
        if (b == zs) return std::nullopt;
        continue;
      }
      Rational q = (b - zs) / base;
      // decide lam^n = q for some n >= 0
      if (is_zero(lam)) {
        if (q == 1 || is_zero(q)) return std::nullopt;
        continue;
      }
      if (lam == -1) {
        if (q == 1 || q == -1) return std::nullopt;
        continue;
      }
      Rational pw(1);
      Integer hq = rat_height(q);
      while (rat_height(pw) <= hq) {
        if (pw == q) return std::nullopt;
        pw *= lam;
      }
    }
    return std::make_pair(std::string("affine-residue-escape"),
                          form + "; exponential equation lambda^n = q has no solution for any bad residue");
  }
  // generic case: follow the residue orbit until it cycles
  std::vector<std::optional<Rational>> seen{r0};
  std::optional<Rational> r = r0;
  for (int i = 0; i < steps; ++i) {
    r = R.apply(r);
    if (R.bad(r)) return std::nullopt;
    if (r && rat_height(*r) > Integer(1) << 4096) return std::nullopt;
    for (const auto& s : seen) {
      if (s == r) {
        return std::make_pair(std::string("good-direction-absorption"),
                              "residue orbit of " + residue_str(r0) + " enters a cycle through " + residue_str(r) + " avoiding the bad set");
      }
    }
    seen.push_back(r);
  }
  return std::nullopt;
}

}  // namespace detail

/// [eta_N, eta_N + v(Res F)/(d^N (d-1))] with eta_N = (1/d) sum_{n<N} sigma_n/d^n.
/// F is normalized at p first. Digits repeat once the exact orbit cycles.
inline EtaEnclosure eta_enclosure(const HomogPair& F0, const ProjPoint& a, const Place& p, int N, int degree_cap = kDefaultDegreeCap) {
  HomogPair F = normalize_at(F0, p);
  const int d = F.d;
  long vres = val(resultant(F), p);
  detail::OrbitScan s = detail::scan_orbit(F, a, N, degree_cap);
  if (s.capped && static_cast<int>(s.points.size()) < N) throw ResourceCapError("exact orbit exceeded the degree cap before depth " + std::to_string(N));
  std::vector<long> sig;
  for (const ProjPoint& x : s.points) sig.push_back(order_sigma(F, x, p));
  EtaEnclosure out;
  if (s.repeat_from >= 0) {
    // last point equals points[repeat_from]; its digit repeats
    sig.pop_back();
    int pre = s.repeat_from, per = static_cast<int>(sig.size()) - pre;
    while (static_cast<int>(sig.size()) < N) sig.push_back(sig[static_cast<std::size_t>(pre + (static_cast<int>(sig.size()) - pre) % per)]);
  }
  sig.resize(static_cast<std::size_t>(N));
  Rational acc(0), w(1, d);
  for (long x : sig) {
    acc += Rational(x) * w;
    w /= d;
  }
  out.digits = sig;
  out.eta = {acc, acc + Rational(vres) / (rat_pow(Rational(d), static_cast<unsigned long>(N)) * (d - 1))};
  return out;
}

/// Local canonical height lambda_F(a) at p for the presentation F as given:
/// lambda = -eta(F_norm, a) - min(0, v(a)) + v(s)/(d-1) where F_norm = s F.
/// Searches, in order, for an exact orbit repetition and for a ZeroTail
/// certificate; otherwise returns an enclosure.
inline LocalHeightResult local_height(const HomogPair& F0, const ProjPoint& a, const Place& p, const HeightOptions& opt = {}) {
  if (a.is_infinity()) throw PreconditionError("local_height is defined for a != infinity");
  HomogPair F = normalize_at(F0, p);
  const int d = F.d;
  FFElem s = F.scale / F0.scale;
  Rational shift = ratio(val(s, p), d - 1);
  Rational base = shift;
  ExtInt va = valuation(a.affine(), p);
  if (!va.is_inf() && va.value() < 0) base -= va.value();

  LocalHeightResult R;
  R.place = p;
  R.normalization_scalar = s;
  auto finish_exact = [&](const Rational& eta) {
    R.exact = true;
    R.certificate.eta = eta;
    R.value = base - eta;
    R.enclosure = Enclosure::point(R.value);
  };

  detail::OrbitScan scan = detail::scan_orbit(F, a, opt.max_iter, opt.degree_cap);
  std::vector<long> sig;
  for (const ProjPoint& x : scan.points) sig.push_back(order_sigma(F, x, p));
  if (scan.repeat_from >= 0) {
    sig.pop_back();
    int pre = scan.repeat_from, per = static_cast<int>(sig.size()) - pre;
    R.digits = sig;
    R.certificate.kind = Certificate::Kind::ExactPreperiodic;
    R.certificate.preperiod = pre;
    R.certificate.period = per;
    R.certificate.detail = "f^" + std::to_string(pre + per) + "(a) = f^" + std::to_string(pre) + "(a) = " + scan.points.back().str();
    finish_exact(rational_from_periodic_digits(sig, pre, per, d));
    return R;
  }

  if (p.residue_field_is_q()) {
    detail::Reduction red = detail::reduce_presentation(F, p);
    bool good = val(resultant(F), p) == 0;
    for (std::size_t n = 0; n < scan.points.size(); ++n) {
      std::optional<std::pair<std::string, std::string>> why;
      if (good) {
        why = std::make_pair(std::string("good-direction-absorption"), std::string("good reduction: v(Res F) = 0"));
      } else {
        why = detail::residue_orbit_avoids(red, detail::residue_q(scan.points[n], p), opt.residue_steps);
      }
      if (why) {
        std::vector<long> head(sig.begin(), sig.begin() + static_cast<long>(n));
        head.push_back(0);
        R.digits = head;
        R.certificate.kind = Certificate::Kind::ZeroTail;
        R.certificate.n0 = static_cast<int>(n);
        R.certificate.reason = why->first;
        R.certificate.detail = why->second;
        finish_exact(rational_from_periodic_digits(head, static_cast<int>(n), 1, d));
        return R;
      }
    }
  } else if (val(resultant(F), p) == 0) {
    R.digits = {0};
    R.certificate.kind = Certificate::Kind::ZeroTail;
    R.certificate.reason = "good-direction-absorption";
    R.certificate.detail = "good reduction: v(Res F) = 0";
    finish_exact(Rational(0));
    return R;
  }

  // enclosure from the digits that were computed exactly
  int N = std::min(static_cast<int>(sig.size()), opt.depth);
  long vres = val(resultant(F), p);
  Rational acc(0), w(1, d);
  for (int n = 0; n < N; ++n) {
    acc += Rational(sig[static_cast<std::size_t>(n)]) * w;
    w /= d;
  }
  Rational tail = Rational(vres) / (rat_pow(Rational(d), static_cast<unsigned long>(N)) * (d - 1));
  R.digits.assign(sig.begin(), sig.begin() + N);
  R.certificate.kind = Certificate::Kind::EnclosureOnly;
  R.certificate.detail = "no certificate within " + std::to_string(opt.max_iter) + " steps; " + std::to_string(N) + " exact digits";
  R.enclosure = {base - acc - tail, base - acc};
  return R;
}

/// Enclosure of lambda(f(a)) - d lambda(a) - v(Q(a, 1)), which contains 0.
inline Enclosure functional_equation_check(const HomogPair& F, const ProjPoint& a, const Place& p, const HeightOptions& opt = {}) {
  if (a.is_infinity()) throw PreconditionError("functional equation needs a != infinity");
  ProjPoint fa = apply_map(F, a);
  if (fa.is_infinity()) throw PreconditionError("functional equation needs f(a) != infinity");
  FFElem q = detail::homog_eval(F.Q, a.affine(), FFElem(1));
  if (q.is_zero()) throw PreconditionError("functional equation needs Q(a) != 0");
  LocalHeightResult la = local_height(F, a, p, opt), lf = local_height(F, fa, p, opt);
  return lf.enclosure - Rational(F.d) * la.enclosure - Enclosure::point(Rational(val(q, p)));
}

/// Contribution of one place to a global height.
struct PlaceHeight {
  Place place;
  LocalHeightResult local;
};

struct GlobalHeightResult {
  bool exact = false;
  Rational value;
  Enclosure enclosure;
  std::vector<PlaceHeight> places;  // sorted, degree weights applied in the sum
};

/// Places where the local height can be nonzero: those dividing a
/// coefficient denominator, the resultant or the denominator of a, and infinity.
inline std::vector<Place> relevant_places(const HomogPair& F, const ProjPoint& a) {
  std::vector<Place> out;
  auto add_from = [&](const FFElem& x) {
    if (x.is_zero()) return;
    for (const Place& pl : support_places(FFElem(x.den())))
      if (std::find(out.begin(), out.end(), pl) == out.end()) out.push_back(pl);
  };
  for (const FFElem& c : F.P) add_from(c);
  for (const FFElem& c : F.Q) add_from(c);
  FFElem res = resultant(F);
  for (const Place& pl : support_places(res))
    if (std::find(out.begin(), out.end(), pl) == out.end()) out.push_back(pl);
  if (!a.is_infinity()) add_from(a.affine());
  std::sort(out.begin(), out.end());
  out.push_back(Place::infinity());
  return out;
}

/// Degree-weighted sum over places of the local heights for one fixed
/// presentation; exact when every place is certified.
inline GlobalHeightResult global_height(const HomogPair& F, const ProjPoint& a, const HeightOptions& opt = {}) {
  if (a.is_infinity()) throw PreconditionError("global_height is defined for a != infinity");
  GlobalHeightResult G;
  G.exact = true;
  G.enclosure = Enclosure::point(Rational(0));
  for (const Place& pl : relevant_places(F, a)) {
    LocalHeightResult lh = local_height(F, a, pl, opt);
    G.enclosure = G.enclosure + Rational(pl.degree()) * lh.enclosure;
    G.exact = G.exact && lh.exact;
    G.places.push_back({pl, std::move(lh)});
  }
  if (G.exact) G.value = G.enclosure.lo;
  return G;
}

}  // namespace qth
