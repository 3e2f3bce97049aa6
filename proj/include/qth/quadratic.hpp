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
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/heights.hpp"
#include "qth/maps.hpp"
#include "qth/puiseux.hpp"
#include "qth/qt_roots.hpp"
#include "qth/rational.hpp"
#include "qth/zpoly_factor.hpp"

namespace qth {

/// Elementary symmetric functions of the three fixed-point multipliers.
struct MultiplierData {
  FFElem s1, s2, s3;
  std::vector<FFElem> known;  // multipliers lying in Q(t), with multiplicity
  Mobius conjugation;         // coordinate change applied before extraction
  int attempts = 0;           // random conjugations tried

  /// x^3 - s1 x^2 + s2 x - s3 as coefficients c0..c3.
  std::vector<FFElem> cubic() const { return {-s3, s2, -s1, FFElem(1)}; }
};

namespace detail {

inline Mobius random_q_mobius(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dist(-5, 5);
  for (;;) {
    long a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng);
    if (a * d - b * c != 0) return Mobius{FFElem(a), FFElem(b), FFElem(c), FFElem(d)};
  }
}

inline ZtPoly fixed_point_poly(const HomogPair& F) { return F.q_poly().shift_up(1) - F.p_poly(); }

inline MultiplierData multipliers_from_symmetric(FFElem s1, FFElem s2, FFElem s3) {
  MultiplierData m{std::move(s1), std::move(s2), std::move(s3), {}, {}, 0};
  if (m.s3 - m.s1 + FFElem(2) != FFElem(0)) throw std::logic_error("fixed point relation s3 - s1 + 2 = 0 violated");
  for (const QtRoot& r : qt_roots(ZtPoly(m.cubic())))
    for (int k = 0; k < r.multiplicity; ++k) m.known.push_back(r.value);
  return m;
}

}  // namespace detail

/// Multipliers of a degree-2 map from the characteristic polynomial of
/// z -> (P' - zQ')/Q acting on Q(t)[z]/(zQ - P). A random Q-Mobius
/// conjugation (seeded) moves fixed points away from infinity first.
inline MultiplierData fixed_point_multipliers(const HomogPair& F, std::uint64_t seed = 1) {
  if (F.d != 2) throw PreconditionError("fixed_point_multipliers needs a degree-2 map");
  std::mt19937_64 rng(seed);
  HomogPair G = F;
  Mobius mu;
  int attempts = 0;
  while (detail::fixed_point_poly(G).degree() != 3) {
    if (attempts == 10) throw PreconditionError("fixed points remain degenerate after 10 random conjugations");
    mu = detail::random_q_mobius(rng);
    G = conjugate(F, mu).first;
    ++attempts;
  }
  ZtPoly fix = detail::fixed_point_poly(G);
  ZtPoly P = G.p_poly(), Q = G.q_poly();
  auto [g, s, unused] = ext_gcd(Q % fix, fix);
  if (g.degree() != 0) throw PreconditionError("P and Q share a fixed point; the map is degenerate");
  ZtPoly m = ((P.derivative() - Q.derivative().shift_up(1)) * s) % fix;
  FFElem M[3][3];
  for (int j = 0; j < 3; ++j) {
    ZtPoly col = (m * ZtPoly::monomial(FFElem(1), static_cast<std::size_t>(j))) % fix;
    for (int i = 0; i < 3; ++i) M[i][j] = col.coeff(static_cast<std::size_t>(i));
  }
  FFElem s1 = M[0][0] + M[1][1] + M[2][2];
  FFElem s2 = M[0][0] * M[1][1] - M[0][1] * M[1][0] + M[0][0] * M[2][2] - M[0][2] * M[2][0] + M[1][1] * M[2][2] - M[1][2] * M[2][1];
  FFElem s3 = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
              M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  MultiplierData out = detail::multipliers_from_symmetric(s1, s2, s3);
  out.conjugation = mu;
  out.attempts = attempts;
  return out;
}

/// Multiplier data of two given multipliers alpha, beta; the third follows
/// from alpha beta gamma - (alpha + beta + gamma) + 2 = 0.
inline MultiplierData multipliers_from_pair(const FFElem& alpha, const FFElem& beta) {
  FFElem den = alpha * beta - FFElem(1);
  if (den.is_zero()) throw PreconditionError("alpha * beta = 1 leaves the third multiplier undetermined");
  FFElem gamma = (alpha + beta - FFElem(2)) / den;
  return detail::multipliers_from_symmetric(alpha + beta + gamma, alpha * beta + alpha * gamma + beta * gamma, alpha * beta * gamma);
}

/// Root valuations, with multiplicity and ascending, of sum c_i x^i from the
/// lower convex hull of (i, v(c_i)); zero roots give +infinity.
inline std::vector<ExtRational> newton_valuations(const std::vector<FFElem>& c, const Place& p) {
  int deg = static_cast<int>(c.size()) - 1;
  while (deg >= 0 && c[static_cast<std::size_t>(deg)].is_zero()) --deg;
  if (deg < 0) throw PreconditionError("newton_valuations of the zero polynomial");
  std::vector<std::pair<int, long>> pts;
  for (int i = 0; i <= deg; ++i)
    if (!c[static_cast<std::size_t>(i)].is_zero()) pts.emplace_back(i, val(c[static_cast<std::size_t>(i)], p));
  std::vector<std::pair<int, long>> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b when it lies on or above the segment a -> q
      Integer lhs = Integer(b.second - a.second) * (q.first - a.first);
      Integer rhs = Integer(q.second - a.second) * (b.first - a.first);
      if (lhs >= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(q);
  }
  std::vector<ExtRational> out;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    int len = hull[k].first - hull[k - 1].first;
    Rational slope = ratio(hull[k].second - hull[k - 1].second, len);
    for (int j = 0; j < len; ++j) out.emplace_back(Rational(-slope));
  }
  std::sort(out.begin(), out.end());
  for (int j = 0; j < pts.front().first; ++j) out.push_back(ExtRational::infinity());
  return out;
}

inline std::vector<ExtRational> newton_valuations(const ZtPoly& g, const Place& p) { return newton_valuations(g.coeffs(), p); }

/// Residual polynomial over Q of the slope-0 part of the Newton polygon.
inline QPoly unit_root_residual(const std::vector<FFElem>& c, const Place& p) {
  if (!p.residue_field_is_q()) throw PreconditionError("residues need a place of degree 1");
  std::vector<ExtRational> vals = newton_valuations(c, p);
  // the slope-0 segment sits at height equal to the valuation of the product
  // of the roots with negative valuation, i.e. at the minimum over indices
  long m = 0;
  bool first = true;
  for (const FFElem& x : c) {
    if (x.is_zero()) continue;
    long v = val(x, p);
    if (first || v < m) m = v;
    first = false;
  }
  // coefficients on the horizontal line v = m, indexed from the leftmost one
  std::vector<Rational> r;
  int lo = -1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero() || val(c[i], p) != m) continue;
    if (lo < 0) lo = static_cast<int>(i);
    r.resize(i - static_cast<std::size_t>(lo) + 1);
    r[i - static_cast<std::size_t>(lo)] = residue(c[i] / p.uniformizer().pow(m), p).rational;
  }
  (void)vals;
  return QPoly(r);
}

/// Outcome of the Kiwi subcase analysis when two multipliers are units.
struct KiwiResult {
  int kiwi_case = 0;  // 2, 3, 4, or 0 for undetermined
  int order = 0;      // p when lambda is a primitive p-th root of unity
  Rational lambda_sum;  // lambda + 1/lambda
  std::vector<Rational> lambda;  // residues in Q, when rational
  bool tau_infinite = false;
  std::optional<Rational> tau_squared;
  std::string reason;
};

/// Decides between cases 2, 3 and 4 from the residues lambda, 1/lambda of
/// the unit multipliers and, for roots of unity, from tau^2.
inline KiwiResult kiwi_subcase(const MultiplierData& m, const Place& p) {
  std::vector<FFElem> c = m.cubic();
  std::vector<ExtRational> v = newton_valuations(c, p);
  if (!(v[0] < ExtRational(Rational(0)) && v[1] == ExtRational(Rational(0)) && v[2] == ExtRational(Rational(0))))
    throw PreconditionError("kiwi_subcase needs two unit multipliers and one of negative valuation");
  KiwiResult out;
  if (!p.residue_field_is_q()) {
    out.reason = "residue field at the place is larger than Q";
    return out;
  }
  QPoly R = unit_root_residual(c, p);
  if (R.degree() != 2) {
    out.reason = "unexpected residual polynomial " + qpoly_to_string(R, "x");
    return out;
  }
  out.lambda_sum = -R.coeff(1) / R.coeff(2);
  out.lambda = rational_roots(R);
  const Rational& s = out.lambda_sum;
  if (s == 2) {
    out.kiwi_case = 2;
    out.reason = "lambda = 1: the fixed Type II point acts by z -> z + 1";
    return out;
  }
  if (s == -2) {
    out.order = 2;
  } else if (s == -1) {
    out.order = 3;
  } else if (is_zero(s)) {
    out.order = 4;
  } else if (s == 1) {
    out.order = 6;
  } else {
    out.kiwi_case = 2;
    out.reason = "lambda + 1/lambda = " + to_string(s) + ", so lambda is not a root of unity";
    return out;
  }
  // tau^2 through symmetric functions of alpha, beta with gamma in Q(t)
  std::optional<FFElem> gamma;
  for (const FFElem& x : m.known) {
    if (!x.is_zero() && val(x, p) < 0) gamma = x;
  }
  if (!gamma) {
    out.reason = "the repelling multiplier does not lie in Q(t); tau^2 is not evaluated";
    return out;
  }
  FFElem S = m.s1 - *gamma, P = m.s3 / *gamma;
  FFElem one(1), u = one - P;
  if (u.is_zero()) {
    out.reason = "alpha * beta = 1 exactly";
    return out;
  }
  std::vector<FFElem> pw{FFElem(2), S};
  for (int k = 2; k <= out.order; ++k) pw.push_back(S * pw[static_cast<std::size_t>(k - 1)] - P * pw[static_cast<std::size_t>(k - 2)]);
  const FFElem& sp = pw[static_cast<std::size_t>(out.order)];
  FFElem X = (sp - FFElem(2)) / u;
  FFElem Y = (P.pow(out.order) - sp + one) / (u * u);
  std::vector<ExtRational> tv = newton_valuations({Y, -X, one}, p);
  bool f0 = tv[0] >= ExtRational(Rational(0)), f1 = tv[1] >= ExtRational(Rational(0));
  if (f0 && f1) {
    Rational rx = residue(X, p).rational, ry = residue(Y, p).rational;
    out.kiwi_case = 3;
    if (rx * rx == 4 * ry) {
      out.tau_squared = rx / 2;
      out.reason = "tau^2 = " + to_string(rx / 2) + " is finite";
    } else {
      out.reason = "tau^2 is finite but the alpha and beta expressions have different residues";
    }
  } else if (!f0 && !f1) {
    out.kiwi_case = 4;
    out.tau_infinite = true;
    out.reason = "tau^2 is infinite";
  } else {
    out.reason = "the alpha and beta expressions for tau^2 disagree on finiteness";
  }
  return out;
}

struct QuadClass {
  enum class Kind { PotentialGoodReduction, StronglyPolynomialLike, IrrationalExists };
  Kind kind = Kind::PotentialGoodReduction;
  int kiwi_case = 0;  // 1..4 for IrrationalExists, 0 when undetermined
  MultiplierData multipliers;
  std::vector<ExtRational> valuations;
  std::vector<Rational> residues;
  std::optional<Rational> tau_squared;
  bool tau_infinite = false;
  std::string reason;

  std::string kind_name() const {
    switch (kind) {
      case Kind::PotentialGoodReduction: return "PotentialGoodReduction";
      case Kind::StronglyPolynomialLike: return "StronglyPolynomialLike";
      default: return "IrrationalExists";
    }
  }
};

/// Degree-2 trichotomy at a place from the multiplier valuations.
inline QuadClass classify(const HomogPair& F, const Place& p, std::uint64_t seed = 1) {
  QuadClass out;
  out.multipliers = fixed_point_multipliers(F, seed);
  out.valuations = newton_valuations(out.multipliers.cubic(), p);
  const auto& v = out.valuations;
  const ExtRational zero(Rational(0));
  if (v[0] >= zero) {
    out.kind = QuadClass::Kind::PotentialGoodReduction;
    out.reason = "all multipliers have valuation >= 0";
    if (p.residue_field_is_q()) out.residues = rational_roots(unit_root_residual(out.multipliers.cubic(), p));
    return out;
  }
  out.kind = QuadClass::Kind::IrrationalExists;
  if (v[2] > zero) {
    // attracting fixed point; the other two are repelling
    if (v[0] == v[1]) {
      out.kind = QuadClass::Kind::StronglyPolynomialLike;
      out.reason = "attracting fixed point and repelling multipliers of equal valuation " + v[0].str();
    } else {
      out.kiwi_case = 1;
      out.reason = "attracting fixed point and repelling multipliers of valuations " + v[0].str() + " and " + v[1].str();
    }
    return out;
  }
  if (v[1] == zero && v[2] == zero) {
    KiwiResult k = kiwi_subcase(out.multipliers, p);
    out.kiwi_case = k.kiwi_case;
    out.residues = k.lambda;
    out.tau_squared = k.tau_squared;
    out.tau_infinite = k.tau_infinite;
    out.reason = k.reason;
    return out;
  }
  out.reason = "multiplier valuations outside the four Kiwi patterns";
  return out;
}

/// Coding disk of the attracting normal form and the constant sigma on it.
struct CodingDisk {
  TypeII disk;
  Rational sigma;
};

struct CantorCoding {
  CodingDisk d0, d1;
  Rational vu;
  ExtInt vp, vp1;       // v(p), v(p - 1); -inf is reported through p_infinite
  bool p_infinite = false;
  bool equal = false;        // sigma(D0) == sigma(D1)
  bool lemma_equal = false;  // v(p) == v(p - 1)
  long sigma_at_0 = 0, sigma_at_1 = 0;  // direct evaluation at the centers
  bool direct_equal = false;
};

/// (z(z - w), u w (p2 z - p1 w)) with p = p1/p2 written over coprime
/// polynomials, so min(v(p1), v(p2)) = 0 at every finite place;
/// p = infinity gives (z(z - w), -u w^2).
inline HomogPair attracting_normal_form(const FFElem& u, const ProjPoint& p) {
  if (p.is_infinity()) return HomogPair({FFElem(0), FFElem(-1), FFElem(1)}, {-u, FFElem(0), FFElem(0)});
  FFElem p1(p.affine().num()), p2(p.affine().den());
  return HomogPair({FFElem(0), FFElem(-1), FFElem(1)}, {-u * p1, u * p2, FFElem(0)});
}

/// Coding disks D0 ∋ 0 and D1 ∋ 1 for a map in the normal form
/// (z(z - w), u w (p2 z - p1 w)) with v(u) > 0. Disks are reported as
/// closed disks D(c, rho) = {v(z - c) >= rho}.
inline CantorCoding cantor_coding(const HomogPair& F, const Place& pl) {
  if (F.d != 2 || F.P[0] != FFElem(0) || F.P[1] != FFElem(-1) || F.P[2] != FFElem(1) || !F.Q[2].is_zero())
    throw PreconditionError("map is not in the normal form (z(z - w), u w (p2 z - p1 w))");
  const FFElem& q0 = F.Q[0];
  const FFElem& q1 = F.Q[1];
  if (q0.is_zero()) throw PreconditionError("p = 0 makes P and Q share the root 0");
  if (q0 + q1 == FFElem(0)) throw PreconditionError("p = 1 makes P and Q share the root 1");
  CantorCoding out;
  long vu = q1.is_zero() ? val(q0, pl) : std::min(val(q0, pl), val(q1, pl));
  if (vu <= 0) throw PreconditionError("normal form needs v(u) > 0 for an attracting fixed point at infinity");
  out.vu = Rational(vu);
  Rational s0(vu), s1(vu), r0(vu), r1(vu);
  if (q1.is_zero()) {
    out.p_infinite = true;
    out.lemma_equal = true;
  } else {
    FFElem p = -q0 / q1;
    out.vp = val(p, pl);
    out.vp1 = val(p - FFElem(1), pl);
    out.lemma_equal = out.vp == out.vp1;
    if (out.vp.value() > 0) {
      s0 += out.vp.value();
      r0 += out.vp.value();
    } else if (out.vp1.value() > 0) {
      s1 += out.vp1.value();
      r1 += out.vp1.value();
    }
  }
  out.d0 = {TypeII::disk(FFElem(0), r0), s0};
  out.d1 = {TypeII::disk(FFElem(1), r1), s1};
  out.equal = s0 == s1;
  out.sigma_at_0 = order_sigma(F, ProjPoint(0L), pl);
  out.sigma_at_1 = order_sigma(F, ProjPoint(1L), pl);
  out.direct_equal = out.sigma_at_0 == out.sigma_at_1;
  return out;
}

/// True when bits[0..n) agrees with an eventually periodic word whose
/// preperiod and period are both at most n/3.
inline bool prefix_looks_periodic(const std::vector<int>& bits, int n) {
  for (int per = 1; 3 * per <= n; ++per) {
    for (int pre = 0; 3 * pre <= n; ++pre) {
      bool ok = true;
      for (int i = pre; i + per < n && ok; ++i) ok = bits[static_cast<std::size_t>(i)] == bits[static_cast<std::size_t>(i + per)];
      if (ok) return true;
    }
  }
  return false;
}

struct WitnessResult {
  PuiseuxApprox point;
  std::vector<int> bits;
  std::vector<Rational> expected;  // sigma of the prescribed disks
  std::vector<Rational> digits;    // sigma re-evaluated along the forward orbit
  bool verified = false;
  bool aperiodic_prefix = false;
  Enclosure eta;
};

/// A point of the Julia set of an attracting normal form whose orbit visits
/// D_{bits[0]}, D_{bits[1]}, ... ; built by backward Newton steps from the
/// fixed point 0 and re-verified by forward evaluation.
inline WitnessResult irrational_witness(const HomogPair& F, const std::vector<int>& bits, int N, const Place& pl,
                                        const PrecisionBudget& budget = {}) {
  CantorCoding cc = cantor_coding(F, pl);
  if (cc.equal) throw PreconditionError("coding disks carry equal sigma; every height is rational");
  if (N < 1 || static_cast<int>(bits.size()) < N) throw PreconditionError("need at least N bits");
  if (!pl.residue_field_is_q()) throw PreconditionError("witness construction needs a place of degree 1");
  PrecisionScope scope(budget.bits);
  Rational smax = std::max(cc.d0.sigma, cc.d1.sigma);
  Rational cut = budget.cutoff + Rational(N) * (smax + 1);
  PuiseuxApprox q0 = to_local_series(F.Q[0], pl, cut, budget.tol), q1 = to_local_series(F.Q[1], pl, cut, budget.tol);
  PuiseuxApprox one = PuiseuxApprox::constant(BigComplex(1), cut, budget.tol);
  PuiseuxApprox y = PuiseuxApprox::zero(cut, budget.tol);
  for (int n = N - 1; n >= 0; --n) {
    // z^2 - (1 + y q1) z - y q0 = 0 near 0 or 1
    std::vector<PuiseuxApprox> G{p_neg(p_mul(y, q0)), p_neg(p_add(one, p_mul(y, q1))), one};
    PuiseuxApprox seed = bits[static_cast<std::size_t>(n)] ? one : PuiseuxApprox::zero(cut, budget.tol);
    y = newton_root(G, seed);
  }
  WitnessResult out;
  out.point = y;
  out.bits.assign(bits.begin(), bits.begin() + N);
  out.verified = true;
  PuiseuxApprox x = y;
  for (int n = 0; n < N; ++n) {
    Rational want = bits[static_cast<std::size_t>(n)] ? cc.d1.sigma : cc.d0.sigma;
    out.expected.push_back(want);
    PuiseuxApprox X = p_mul(x, p_sub(x, one));
    PuiseuxApprox Y = p_add(p_mul(q1, x), q0);
    std::optional<Rational> s = detail::determined_min(X, Y);
    if (!s || *s != want) {
      out.verified = false;
      break;
    }
    out.digits.push_back(*s);
    if (n + 1 < N) x = p_div(X, Y);
  }
  out.aperiodic_prefix = !prefix_looks_periodic(out.bits, N);
  Rational acc(0), w(1, 2);
  for (const Rational& s : out.digits) {
    acc += s * w;
    w /= 2;
  }
  // sigma stays within [min, max] of the disk values on the Julia set
  out.eta = {acc + std::min(cc.d0.sigma, cc.d1.sigma) * w * 2, acc + smax * w * 2};
  return out;
}

}  // namespace qth
