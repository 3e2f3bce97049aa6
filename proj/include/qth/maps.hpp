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
#include "qth/ffelem.hpp"
#include "qth/parse.hpp"
#include "qth/poly.hpp"
#include "qth/qt_roots.hpp"
#include "qth/rational.hpp"
#include "qth/zt_poly.hpp"

namespace qth {

/// A point of P^1(Q(t)): an affine coordinate or infinity. The affine
/// coordinate is a canonical FFElem, so equality is structural.
class ProjPoint {
 public:
  ProjPoint() : inf_(false) {}
  ProjPoint(FFElem x) : inf_(false), x_(std::move(x)) {}  // NOLINT
  ProjPoint(long c) : inf_(false), x_(c) {}               // NOLINT
  static ProjPoint infinity() {
    ProjPoint p;
    p.inf_ = true;
    return p;
  }

  bool is_infinity() const { return inf_; }
  const FFElem& affine() const {
    if (inf_) throw PreconditionError("affine coordinate of the point at infinity");
    return x_;
  }
  /// Primitive homogeneous coordinates (num, den) in Q[t], or (1, 0).
  std::pair<FFElem, FFElem> coords() const {
    if (inf_) return {FFElem(1), FFElem(0)};
    return {FFElem(x_.num()), FFElem(x_.den())};
  }
  std::string str() const { return inf_ ? "inf" : x_.str(); }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.x_ == b.x_);
  }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }

 private:
  bool inf_;
  FFElem x_;
};

/// "inf" or an expression in t.
inline ProjPoint parse_point(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "infinity" || s == "oo") return ProjPoint::infinity();
  return ProjPoint(parse_ffelem(s));
}

/// Homogeneous presentation F = (P, Q) of degree d. P[i] and Q[i] are the
/// coefficients of z^i w^(d-i). `scale` accumulates the scalars applied by
/// normalize_at, so the current pair equals scale times the original one.
struct HomogPair {
  int d = 1;
  std::vector<FFElem> P, Q;
  FFElem scale{1};

  HomogPair() = default;
  HomogPair(std::vector<FFElem> p, std::vector<FFElem> q) : P(std::move(p)), Q(std::move(q)) {
    std::size_t n = std::max(P.size(), Q.size());
    if (n < 2) throw PreconditionError("a map needs degree at least 1");
    P.resize(n, FFElem());
    Q.resize(n, FFElem());
    d = static_cast<int>(n) - 1;
  }

  ZtPoly p_poly() const { return ZtPoly(P); }
  ZtPoly q_poly() const { return ZtPoly(Q); }

  friend bool operator==(const HomogPair& a, const HomogPair& b) { return a.d == b.d && a.P == b.P && a.Q == b.Q; }
};

namespace detail {

inline std::string zt_poly_to_string(const ZtPoly& p, int formal_degree, bool homogeneous) {
  if (p.is_zero_poly()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const FFElem& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    std::string mono;
    auto power = [](const char* v, int k) { return k == 0 ? std::string() : (k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k)); };
    std::string zp = power("z", i), wp = homogeneous ? power("w", formal_degree - i) : std::string();
    mono = zp.empty() ? wp : (wp.empty() ? zp : zp + "*" + wp);
    std::string cs = c.str();
    if (!out.empty()) out += " + ";
    if (mono.empty()) {
      out += cs.find(' ') == std::string::npos && cs[0] != '-' ? cs : "(" + cs + ")";
    } else if (c == FFElem(1)) {
      out += mono;
    } else {
      bool atomic = cs.find_first_of(" /") == std::string::npos && cs[0] != '-';
      out += (atomic ? cs : "(" + cs + ")") + "*" + mono;
    }
  }
  return out;
}

/// Sum_i c[i] * x^i * y^(d-i).
inline FFElem homog_eval(const std::vector<FFElem>& c, const FFElem& x, const FFElem& y) {
  const std::size_t n = c.size();
  std::vector<FFElem> xp(n), yp(n);
  xp[0] = FFElem(1);
  yp[0] = FFElem(1);
  for (std::size_t i = 1; i < n; ++i) {
    xp[i] = xp[i - 1] * x;
    yp[i] = yp[i - 1] * y;
  }
  FFElem acc;
  for (std::size_t i = 0; i < n; ++i)
    if (!c[i].is_zero()) acc += c[i] * xp[i] * yp[n - 1 - i];
  return acc;
}

}  // namespace detail

/// Builds a presentation from num/den in Q(t)[z]: the pair is cleared of
/// t-denominators and made primitive over Z[t], so for instance the Lattes map
/// becomes ((z^2 - t w^2)^2, 4zw(z - w)(z - tw)).
inline HomogPair homog_from_ratfun(const ZtRatFun& r) {
  if (r.num.is_zero_poly()) throw PreconditionError("the zero map is not a rational map of positive degree");
  int d = std::max(r.num.degree(), r.den.degree());
  if (d < 1) throw PreconditionError("constant maps are not supported");
  std::vector<FFElem> all = r.num.coeffs();
  all.insert(all.end(), r.den.coeffs().begin(), r.den.coeffs().end());
  std::vector<QPoly> cleared = detail::clear_z_denominators(ZtPoly(all));
  // primitive over Q[t] without constant rescaling
  QPoly g;
  for (const QPoly& q : cleared)
    if (!q.is_zero_poly()) g = g.is_zero_poly() ? q.monic() : gcd(g, q);
  // integer content: clear rational denominators, divide by the gcd of numerators
  Integer den_lcm(1), num_gcd(0);
  for (QPoly& q : cleared) {
    if (!q.is_zero_poly()) q = q / g;
    for (const Rational& a : q.coeffs()) {
      den_lcm = lcm(den_lcm, Integer(a.get_den()));
      num_gcd = gcd(num_gcd, Integer(a.get_num()));
    }
  }
  Rational k = Rational(den_lcm) / Rational(num_gcd);
  std::vector<FFElem> P(static_cast<std::size_t>(d) + 1), Q(static_cast<std::size_t>(d) + 1);
  for (QPoly& q : cleared) q = k * q;
  g = QPoly(Rational(1));
  for (std::size_t i = 0; i < r.num.size(); ++i) P[i] = FFElem(cleared[i] / g);
  for (std::size_t i = 0; i < r.den.size(); ++i) Q[i] = FFElem(cleared[r.num.size() + i] / g);
  return HomogPair(P, Q);
}

/// Parses a map such as "(z+1)*(z-t)/(z+t)" in the variables z and t.
inline HomogPair parse_map(std::string_view text) { return homog_from_ratfun(parse_zt_ratfun(text)); }

/// "(P(z))/(Q(z))" in the variables z and t; accepted by parse_map.
inline std::string map_to_string(const HomogPair& F) {
  std::string p = "(" + detail::zt_poly_to_string(F.p_poly(), F.d, false) + ")";
  std::string q = detail::zt_poly_to_string(F.q_poly(), F.d, false);
  return q == "1" ? p : p + "/(" + q + ")";
}

/// Homogeneous forms, e.g. P = "z^2 + (-t)*w^2".
inline std::string homog_p_string(const HomogPair& F) { return detail::zt_poly_to_string(F.p_poly(), F.d, true); }
inline std::string homog_q_string(const HomogPair& F) { return detail::zt_poly_to_string(F.q_poly(), F.d, true); }

namespace detail {

/// Bareiss fraction-free determinant over Q[t].
inline QPoly bareiss_det(std::vector<std::vector<QPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return QPoly(Rational(1));
  QPoly prev(Rational(1));
  bool neg = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero_poly()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero_poly()) ++r;
      if (r == n) return QPoly();
      std::swap(m[k], m[r]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = QPoly();
    }
    prev = m[k][k];
  }
  QPoly det = m[n - 1][n - 1];
  return neg ? -det : det;
}

}  // namespace detail

/// Homogeneous resultant Res(P, Q) with formal degree d in each argument,
/// as the determinant of the Sylvester matrix (P rows first).
inline FFElem resultant(const HomogPair& F) {
  std::vector<FFElem> all = F.P;
  all.insert(all.end(), F.Q.begin(), F.Q.end());
  ZtPoly joint(all);
  // common denominator of all coefficients
  QPoly L(Rational(1));
  for (const FFElem& c : joint.coeffs())
    if (c.den().degree() > 0) L = L * (c.den() / gcd(L, c.den()));
  const std::size_t d = static_cast<std::size_t>(F.d), n = 2 * d;
  std::vector<std::vector<QPoly>> m(n, std::vector<QPoly>(n));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t i = 0; i <= d; ++i) {
      // coefficient of z^(d-i) in row r sits in column r + i
      const FFElem& p = F.P[d - i];
      const FFElem& q = F.Q[d - i];
      m[r][r + i] = p.num() * (L / p.den());
      m[d + r][r + i] = q.num() * (L / q.den());
    }
  }
  QPoly det = detail::bareiss_det(std::move(m));
  return FFElem(det, L.pow(n));
}

/// Smallest valuation among all coefficients of P and Q.
inline long min_coeff_valuation(const HomogPair& F, const Place& p) {
  ExtInt m = ExtInt::infinity();
  for (const FFElem& c : F.P) m = min(m, valuation(c, p));
  for (const FFElem& c : F.Q) m = min(m, valuation(c, p));
  return m.value();
}

/// The scalar pi^(-m) (t^m at infinity) turning a joint minimum valuation m into 0.
inline FFElem normalizing_scalar(const HomogPair& F, const Place& p) {
  long m = min_coeff_valuation(F, p);
  return p.uniformizer().pow(-m);
}

inline bool is_normalized_at(const HomogPair& F, const Place& p) { return min_coeff_valuation(F, p) == 0; }

/// Multiplies both P and Q by s, recording s in the scaling log.
inline HomogPair scale_pair(const HomogPair& F, const FFElem& s) {
  if (s.is_zero()) throw PreconditionError("cannot scale a presentation by 0");
  HomogPair G = F;
  for (FFElem& c : G.P) c *= s;
  for (FFElem& c : G.Q) c *= s;
  G.scale = F.scale * s;
  return G;
}

/// Rescales F by a power of the uniformizer so that every coefficient is
/// integral at p and the joint minimum valuation is 0.
inline HomogPair normalize_at(const HomogPair& F, const Place& p) {
  if (resultant(F).is_zero()) throw PreconditionError("degenerate pair: P and Q share a common factor");
  long m = min_coeff_valuation(F, p);
  if (m == 0) return F;
  return scale_pair(F, p.uniformizer().pow(-m));
}

/// (P(A), Q(A)) for the primitive homogeneous coordinates A of a.
inline std::pair<FFElem, FFElem> eval_homog(const HomogPair& F, const ProjPoint& a) {
  auto [x, y] = a.coords();
  return {detail::homog_eval(F.P, x, y), detail::homog_eval(F.Q, x, y)};
}

/// f(a) for the map presented by F.
inline ProjPoint apply_map(const HomogPair& F, const ProjPoint& a) {
  auto [X, Y] = eval_homog(F, a);
  if (Y.is_zero()) {
    if (X.is_zero()) throw PreconditionError("P and Q vanish simultaneously; the pair is degenerate");
    return ProjPoint::infinity();
  }
  return ProjPoint(X / Y);
}

/// sigma(F, a) = min(v(P(A)), v(Q(A))) - d * min(v(A1), v(A2)), evaluated on
/// the presentation as given. For F normalized at p this is the order
/// function; for sF it equals sigma(F, a) + v(s).
inline long order_sigma(const HomogPair& F, const ProjPoint& a, const Place& p) {
  auto [x, y] = a.coords();
  auto [X, Y] = eval_homog(F, a);
  long shift = min(valuation(x, p), valuation(y, p)).value();
  return min(valuation(X, p), valuation(Y, p)).value() - F.d * shift;
}

/// Cap on the total t-degree of orbit points and composed coefficients.
inline constexpr int kDefaultDegreeCap = 4096;

/// a, f(a), ..., f^n(a) exactly.
inline std::vector<ProjPoint> iterate_point(const HomogPair& F, const ProjPoint& a, int n, int degree_cap = kDefaultDegreeCap,
                                            const std::function<void(int)>& progress = nullptr) {
  std::vector<ProjPoint> orbit{a};
  for (int i = 0; i < n; ++i) {
    ProjPoint next = apply_map(F, orbit.back());
    if (!next.is_infinity() && next.affine().height_degree() > degree_cap)
      throw ResourceCapError("orbit point degree exceeds the cap of " + std::to_string(degree_cap) + " at step " + std::to_string(i + 1));
    orbit.push_back(std::move(next));
    if (progress) progress(i + 1);
  }
  return orbit;
}

/// F o G as a homogeneous pair of degree deg F * deg G, without normalization.
inline HomogPair compose(const HomogPair& F, const HomogPair& G) {
  const std::size_t d = static_cast<std::size_t>(F.d);
  ZtPoly gp = G.p_poly(), gq = G.q_poly();
  // formal homogeneous multiplication is ordinary multiplication of coefficient vectors
  std::vector<ZtPoly> pp(d + 1), qp(d + 1);
  pp[0] = ZtPoly(FFElem(1));
  qp[0] = ZtPoly(FFElem(1));
  for (std::size_t i = 1; i <= d; ++i) {
    pp[i] = pp[i - 1] * gp;
    qp[i] = qp[i - 1] * gq;
  }
  ZtPoly P, Q;
  for (std::size_t i = 0; i <= d; ++i) {
    ZtPoly mono = pp[i] * qp[d - i];
    if (!F.P[i].is_zero()) P += ZtPoly(F.P[i]) * mono;
    if (!F.Q[i].is_zero()) Q += ZtPoly(F.Q[i]) * mono;
  }
  std::vector<FFElem> pc = P.coeffs(), qc = Q.coeffs();
  std::size_t n = static_cast<std::size_t>(F.d * G.d) + 1;
  pc.resize(n);
  qc.resize(n);
  return HomogPair(pc, qc);
}

/// F^n (n >= 1) by repeated composition.
inline HomogPair iterate_map(const HomogPair& F, int n, int degree_cap = 256) {
  if (n < 1) throw PreconditionError("iterate_map needs n >= 1");
  HomogPair G = F;
  for (int i = 1; i < n; ++i) {
    if (static_cast<long>(G.d) * F.d > degree_cap) throw ResourceCapError("iterated map degree exceeds the cap of " + std::to_string(degree_cap));
    G = compose(F, G);
  }
  return G;
}

/// Mobius transformation z -> (a z + b) / (c z + d) over Q(t).
struct Mobius {
  FFElem a{1}, b{0}, c{0}, d{1};

  FFElem det() const { return a * d - b * c; }
  Mobius inverse() const { return Mobius{d, -b, -c, a}; }
  ProjPoint apply(const ProjPoint& x) const {
    if (x.is_infinity()) return c.is_zero() ? ProjPoint::infinity() : ProjPoint(a / c);
    FFElem den = c * x.affine() + d;
    if (den.is_zero()) return ProjPoint::infinity();
    return ProjPoint((a * x.affine() + b) / den);
  }
  std::string str() const { return "((" + a.str() + ")*z + (" + b.str() + ")) / ((" + c.str() + ")*z + (" + d.str() + "))"; }
};

/// Parses a Mobius transformation written in z, e.g. "t*z", "z+t", "1/z".
inline Mobius parse_mobius(std::string_view text) {
  ZtRatFun r = parse_zt_ratfun(text);
  if (r.num.degree() > 1 || r.den.degree() > 1 || (r.num.degree() < 1 && r.den.degree() < 1))
    throw PreconditionError("not a Mobius transformation: " + std::string(text));
  Mobius m{r.num.coeff(1), r.num.coeff(0), r.den.coeff(1), r.den.coeff(0)};
  if (m.det().is_zero()) throw PreconditionError("Mobius transformation is not invertible");
  return m;
}

/// One elementary coordinate change eta applied to points: scale x -> c x,
/// translate x -> x + c, or invert x -> 1/x.
struct ConjugationStep {
  enum class Kind { Scale, Translate, Invert };
  Kind kind;
  FFElem c;

  std::string str() const {
    switch (kind) {
      case Kind::Scale: return "scale(" + c.str() + ")";
      case Kind::Translate: return "translate(" + c.str() + ")";
      default: return "invert";
    }
  }
};

/// The coordinate change eta = mu^{-1} of a conjugation Phi = mu o f o mu^{-1},
/// as elementary steps in the order they act on points. The canonical
/// heights then satisfy
///   lambda_Phi(x) = lambda_f(eta(x)) + sum of step corrections,
/// where scale(c) contributes v(c), translate contributes 0 and invert
/// contributes v(1/x_i) at the intermediate point x_i it acts on.
struct TransformRecord {
  std::vector<ConjugationStep> steps;
};

namespace detail {

/// Presentation of eta^{-1} o Psi o eta for one elementary eta.
inline HomogPair conjugate_step(const HomogPair& F, const ConjugationStep& s) {
  const std::size_t d = static_cast<std::size_t>(F.d);
  std::vector<FFElem> P(d + 1), Q(d + 1);
  switch (s.kind) {
    case ConjugationStep::Kind::Scale: {
      // (c^{-d} P(cz, w), c^{1-d} Q(cz, w))
      for (std::size_t i = 0; i <= d; ++i) {
        P[i] = F.P[i] * s.c.pow(static_cast<long>(i) - F.d);
        Q[i] = F.Q[i] * s.c.pow(static_cast<long>(i) + 1 - F.d);
      }
      break;
    }
    case ConjugationStep::Kind::Translate: {
      // (P(z + cw, w) - c Q(z + cw, w), Q(z + cw, w))
      ZtPoly shift(std::vector<FFElem>{s.c, FFElem(1)});
      ZtPoly p = F.p_poly().compose(shift), q = F.q_poly().compose(shift);
      p = p - ZtPoly(s.c) * q;
      for (std::size_t i = 0; i <= d; ++i) {
        P[i] = p.coeff(i);
        Q[i] = q.coeff(i);
      }
      break;
    }
    case ConjugationStep::Kind::Invert: {
      // (Q(w, z), P(w, z))
      for (std::size_t i = 0; i <= d; ++i) {
        P[i] = F.Q[d - i];
        Q[i] = F.P[d - i];
      }
      break;
    }
  }
  HomogPair G(P, Q);
  G.scale = F.scale;
  return G;
}

}  // namespace detail

/// Decomposes eta = mu^{-1} into elementary steps.
inline TransformRecord decompose_inverse(const Mobius& mu) {
  if (mu.det().is_zero()) throw PreconditionError("Mobius transformation is not invertible");
  using K = ConjugationStep::Kind;
  TransformRecord rec;
  if (mu.c.is_zero()) {
    // eta(x) = (d x - b) / a
    FFElem shift = -mu.b / mu.d, factor = mu.d / mu.a;
    if (!shift.is_zero()) rec.steps.push_back({K::Translate, shift});
    if (factor != FFElem(1)) rec.steps.push_back({K::Scale, factor});
  } else {
    // eta(x) = -d/c - (det/c^2) / (x - a/c)
    FFElem s1 = -mu.a / mu.c, s3 = -mu.det() / (mu.c * mu.c), s4 = -mu.d / mu.c;
    if (!s1.is_zero()) rec.steps.push_back({K::Translate, s1});
    rec.steps.push_back({K::Invert, FFElem()});
    if (s3 != FFElem(1)) rec.steps.push_back({K::Scale, s3});
    if (!s4.is_zero()) rec.steps.push_back({K::Translate, s4});
  }
  return rec;
}

/// Presentation of mu o f o mu^{-1} built by the elementary formulas,
/// together with the record needed to pull heights back.
inline std::pair<HomogPair, TransformRecord> conjugate(const HomogPair& F, const Mobius& mu) {
  TransformRecord rec = decompose_inverse(mu);
  HomogPair G = F;
  for (std::size_t i = rec.steps.size(); i-- > 0;) G = detail::conjugate_step(G, rec.steps[i]);
  return {G, rec};
}

/// eta(x) together with the accumulated height correction at place p.
struct PullbackData {
  ProjPoint eta_x;
  Rational correction;
};

inline PullbackData pullback(const TransformRecord& rec, const ProjPoint& x, const Place& p) {
  using K = ConjugationStep::Kind;
  ProjPoint cur = x;
  Rational corr(0);
  for (const ConjugationStep& s : rec.steps) {
    if (cur.is_infinity()) throw PreconditionError("pullback passes through infinity");
    switch (s.kind) {
      case K::Scale:
        corr += val(s.c, p);
        cur = ProjPoint(s.c * cur.affine());
        break;
      case K::Translate:
        cur = ProjPoint(cur.affine() + s.c);
        break;
      case K::Invert:
        if (cur.affine().is_zero()) throw PreconditionError("pullback inverts the point 0");
        corr -= val(cur.affine(), p);
        cur = ProjPoint(cur.affine().inverse());
        break;
    }
  }
  return {cur, corr};
}

// ---------------------------------------------------------------------------
// Factored presentations and Type II points

/// A zero or pole of the map with multiplicity.
struct FactoredRoot {
  ProjPoint point;
  int multiplicity = 1;
};

/// F = (c * prod zero-factors, u * prod pole-factors) where the factor of a
/// root z_i is (z - z_i w) when v(z_i) >= 0, (z_i^{-1} z - w) when v(z_i) < 0,
/// and w for the root at infinity. The factors are primitive at `place`.
struct FactoredMap {
  HomogPair F;
  Place place = Place::t();
  FFElem c, u;
  std::vector<FactoredRoot> zeros, poles;
};

namespace detail {

inline std::vector<FactoredRoot> homog_roots(const std::vector<FFElem>& coeffs, int d, const char* what) {
  ZtPoly p(coeffs);
  std::vector<FactoredRoot> out;
  int total = 0;
  for (const QtRoot& r : qt_roots(p)) {
    out.push_back({ProjPoint(r.value), r.multiplicity});
    total += r.multiplicity;
  }
  if (p.degree() < d) {
    out.push_back({ProjPoint::infinity(), d - p.degree()});
    total += d - p.degree();
  }
  if (total != d) throw PreconditionError(std::string("the ") + what + " of the map are not all defined over Q(t); factored form unavailable");
  return out;
}

inline FFElem factored_leading(const std::vector<FFElem>& coeffs, const std::vector<FactoredRoot>& roots, const Place& p) {
  // compare the coefficient of the highest power of z present
  ZtPoly prod(FFElem(1));
  for (const FactoredRoot& r : roots) {
    if (r.point.is_infinity()) continue;
    const FFElem& z = r.point.affine();
    ZtPoly f = (z.is_zero() || val(z, p) >= 0) ? ZtPoly(std::vector<FFElem>{-z, FFElem(1)}) : ZtPoly(std::vector<FFElem>{FFElem(-1), z.inverse()});
    for (int k = 0; k < r.multiplicity; ++k) prod = prod * f;
  }
  ZtPoly full(coeffs);
  return full.lc() / prod.lc();
}

}  // namespace detail

/// Factors F (normalized at p first) into c, u and explicit zeros/poles.
inline FactoredMap factor_map(const HomogPair& F0, const Place& p) {
  FactoredMap fm;
  fm.F = normalize_at(F0, p);
  fm.place = p;
  fm.zeros = detail::homog_roots(fm.F.P, fm.F.d, "zeros");
  fm.poles = detail::homog_roots(fm.F.Q, fm.F.d, "poles");
  fm.c = detail::factored_leading(fm.F.P, fm.zeros, p);
  fm.u = detail::factored_leading(fm.F.Q, fm.poles, p);
  return fm;
}

/// A Type II point: the closed disk of radius |pi|^rho around `center` in
/// the chosen chart. The infinity chart uses the coordinate y = 1/z and is
/// only used for disks strictly inside the residue direction at infinity.
struct TypeII {
  enum class Chart { Unit, Infinity };
  Chart chart = Chart::Unit;
  FFElem center;
  Rational rho;

  static TypeII gauss() { return TypeII{}; }
  static TypeII disk(FFElem center, Rational rho) { return TypeII{Chart::Unit, std::move(center), std::move(rho)}; }
  bool is_gauss() const { return sgn(rho) == 0; }
  std::string str() const {
    if (is_gauss()) return "zeta0";
    std::string c = center.str();
    std::string r = to_string(rho);
    return chart == Chart::Unit ? "D(" + c + ", " + r + ")" : "D_inf(" + c + ", " + r + ")";
  }
  friend bool operator==(const TypeII& a, const TypeII& b) {
    if (a.is_gauss() || b.is_gauss()) return a.is_gauss() == b.is_gauss();
    return a.chart == b.chart && a.rho == b.rho;  // centers compared by the caller at a place
  }
};

/// Same Type II point at place p: same chart and radius, centers within rho.
inline bool same_point(const TypeII& a, const TypeII& b, const Place& p) {
  if (a.is_gauss() || b.is_gauss()) return a.is_gauss() == b.is_gauss();
  if (a.chart != b.chart || a.rho != b.rho) return false;
  return to_ext_rational(valuation(a.center - b.center, p)) >= ExtRational(a.rho);
}

/// The chart coordinate of a root: itself in the unit chart, 1/z in the
/// infinity chart (infinity becomes 0).
inline ProjPoint chart_coordinate(const ProjPoint& z, TypeII::Chart chart) {
  if (chart == TypeII::Chart::Unit) return z;
  if (z.is_infinity()) return ProjPoint(FFElem(0));
  if (z.affine().is_zero()) return ProjPoint::infinity();
  return ProjPoint(z.affine().inverse());
}

/// min(v(x - center), rho) with infinity counted as outside the disk.
inline Rational capped_distance(const ProjPoint& x, const FFElem& center, const Rational& rho, const Place& p) {
  if (x.is_infinity()) return Rational(0);
  ExtInt v = valuation(x.affine() - center, p);
  if (v.is_inf()) return rho;
  Rational r(v.value());
  if (r < 0) return Rational(0);
  return r < rho ? r : rho;
}

/// Both sides of the minimum defining sigma_F at a Type II point.
struct SigmaSides {
  Rational zero_side, pole_side;
  Rational value() const { return zero_side < pole_side ? zero_side : pole_side; }
};

inline SigmaSides sigma_sides(const FactoredMap& fm, const TypeII& z) {
  const Place& p = fm.place;
  SigmaSides s{Rational(val(fm.c, p)), Rational(val(fm.u, p))};
  if (z.is_gauss()) return s;
  if (z.chart == TypeII::Chart::Unit && !z.center.is_zero() && val(z.center, p) < 0)
    throw PreconditionError("unit-chart center must be integral at the place");
  for (const FactoredRoot& r : fm.zeros)
    s.zero_side += r.multiplicity * capped_distance(chart_coordinate(r.point, z.chart), z.center, z.rho, p);
  for (const FactoredRoot& r : fm.poles)
    s.pole_side += r.multiplicity * capped_distance(chart_coordinate(r.point, z.chart), z.center, z.rho, p);
  return s;
}

/// sigma_F at a Type II point, by replacing v(a - z_i) in the explicit
/// formula with min(v(center - z_i), rho).
inline Rational sigma_on_typeII(const FactoredMap& fm, const TypeII& z) { return sigma_sides(fm, z).value(); }

}  // namespace qth
