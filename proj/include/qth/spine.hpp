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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qth/errors.hpp"
#include "qth/ffelem.hpp"
#include "qth/maps.hpp"
#include "qth/rational.hpp"

namespace qth {

struct SpineVertex {
  TypeII point;
  Rational sigma;
};

struct SpineEdge {
  std::size_t from, to;  // from is the endpoint closer to the Gauss point
  Rational slope;
};

/// Finite metric tree of Type II points; vertex 0 is the Gauss point.
struct SpineTree {
  std::vector<SpineVertex> vertices;
  std::vector<SpineEdge> edges;
  Place place = Place::t();
};

namespace detail {

inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Finite distances v(x - r) > 0 from the chart point x to the chart images
/// of all zeros and poles.
inline std::vector<Rational> root_distances(const FactoredMap& fm, TypeII::Chart chart, const FFElem& x) {
  std::vector<Rational> out;
  auto scan = [&](const std::vector<FactoredRoot>& roots) {
    for (const FactoredRoot& r : roots) {
      ProjPoint y = chart_coordinate(r.point, chart);
      if (y.is_infinity()) continue;
      ExtInt v = valuation(y.affine() - x, fm.place);
      if (!v.is_inf() && v.value() > 0) out.emplace_back(v.value());
    }
  };
  scan(fm.zeros);
  scan(fm.poles);
  return out;
}

/// Exact breakpoints of r -> sigma_F(D(x, r)) on [lo, hi] (both included).
/// Between consecutive returned points the function is linear.
inline std::vector<Rational> path_breakpoints(const FactoredMap& fm, TypeII::Chart chart, const FFElem& x, const Rational& lo,
                                              const Rational& hi) {
  auto sides = [&](const Rational& r) {
    if (sgn(r) == 0) return sigma_sides(fm, TypeII::gauss());
    return sigma_sides(fm, TypeII{chart, x, r});
  };
  std::vector<Rational> cand{lo, hi};
  for (const Rational& d : root_distances(fm, chart, x))
    if (d > lo && d < hi) cand.push_back(d);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // on each piece both sides are linear; add interior crossings
  std::vector<Rational> with_cross;
  for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
    with_cross.push_back(cand[i]);
    SigmaSides a = sides(cand[i]), b = sides(cand[i + 1]);
    Rational da = a.zero_side - a.pole_side, db = b.zero_side - b.pole_side;
    if (sgn(da) * sgn(db) < 0) with_cross.push_back(cand[i] + (cand[i + 1] - cand[i]) * da / (da - db));
  }
  with_cross.push_back(cand.back());
  // keep the ends and points where the slope changes
  std::vector<Rational> out{with_cross.front()};
  for (std::size_t i = 1; i + 1 < with_cross.size(); ++i) {
    const Rational &p = with_cross[i - 1], &c = with_cross[i], &n = with_cross[i + 1];
    Rational s1 = (sides(c).value() - sides(p).value()) / (c - p);
    Rational s2 = (sides(n).value() - sides(c).value()) / (n - c);
    if (s1 != s2) out.push_back(c);
  }
  if (with_cross.size() > 1) out.push_back(with_cross.back());
  return out;
}

/// Radius where r -> sigma_F(D(x, r)) first attains its maximum.
inline Rational first_max_radius(const FactoredMap& fm, TypeII::Chart chart, const FFElem& x) {
  Rational far(1);
  for (const Rational& d : root_distances(fm, chart, x)) far = rmax(far, d);
  // past every finite distance each side grows with the multiplicity of x
  // itself, so one more crossing can occur; make the horizon cover it
  SigmaSides s = sigma_sides(fm, TypeII{chart, x, far});
  Rational horizon = far + abs(s.zero_side - s.pole_side) + 1;
  std::vector<Rational> bp = path_breakpoints(fm, chart, x, Rational(0), horizon);
  auto value = [&](const Rational& r) {
    return sgn(r) == 0 ? sigma_on_typeII(fm, TypeII::gauss()) : sigma_on_typeII(fm, TypeII{chart, x, r});
  };
  Rational top = value(horizon);
  for (const Rational& r : bp)
    if (value(r) == top) return r;
  return horizon;
}

/// Canonical center of D(x, rho): 0 when it lies in the disk, otherwise the
/// shortest printed candidate (ties broken lexicographically).
inline FFElem canonical_center(const FFElem& x, const Rational& rho, const std::vector<FFElem>& candidates, const Place& p) {
  auto inside = [&](const FFElem& y) { return to_ext_rational(valuation(y - x, p)) >= ExtRational(rho); };
  if (inside(FFElem())) return FFElem();
  FFElem best = x;
  std::string bs = x.str();
  for (const FFElem& y : candidates) {
    if (!inside(y)) continue;
    std::string ys = y.str();
    if (ys.size() < bs.size() || (ys.size() == bs.size() && ys < bs)) {
      best = y;
      bs = ys;
    }
  }
  return best;
}

}  // namespace detail

/// The spine: the union of the segments [zeta0, D(x, rho*_x)] over the zeros
/// and poles x, where rho*_x is the radius at which sigma_F first reaches its
/// maximum along the way to x. Vertices are the Gauss point, the tips,
/// branch points and points where the slope of sigma_F changes.
inline SpineTree build_spine(const FactoredMap& fm) {
  const Place& p = fm.place;
  struct Tip {
    TypeII::Chart chart;
    FFElem x;
    Rational rho;
  };
  std::vector<Tip> tips;
  for (const auto* roots : {&fm.zeros, &fm.poles}) {
    for (const FactoredRoot& r : *roots) {
      TypeII::Chart chart = TypeII::Chart::Unit;
      ProjPoint y = r.point;
      if (r.point.is_infinity() || (!r.point.affine().is_zero() && val(r.point.affine(), p) < 0)) chart = TypeII::Chart::Infinity;
      y = chart_coordinate(r.point, chart);
      Rational rho = detail::first_max_radius(fm, chart, y.affine());
      if (sgn(rho) > 0) tips.push_back({chart, y.affine(), rho});
    }
  }
  auto on_path = [&](const Tip& a, const Tip& b) {
    // D(a.x, a.rho) lies on [zeta0, D(b.x, b.rho)]
    return a.chart == b.chart && a.rho <= b.rho && to_ext_rational(valuation(a.x - b.x, p)) >= ExtRational(a.rho);
  };
  std::vector<Tip> maximal;
  for (std::size_t i = 0; i < tips.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < tips.size() && !covered; ++j) {
      if (i == j) continue;
      bool ij = on_path(tips[i], tips[j]), ji = on_path(tips[j], tips[i]);
      covered = ij && (!ji || j < i);
    }
    if (!covered) maximal.push_back(tips[i]);
  }

  std::vector<FFElem> centers;
  for (const Tip& t : maximal) centers.push_back(t.x);

  SpineTree tree;
  tree.place = p;
  tree.vertices.push_back({TypeII::gauss(), sigma_on_typeII(fm, TypeII::gauss())});
  auto find_or_add = [&](TypeII::Chart chart, const FFElem& x, const Rational& rho) -> std::size_t {
    if (sgn(rho) == 0) return 0;
    TypeII pt{chart, detail::canonical_center(x, rho, centers, p), rho};
    for (std::size_t i = 0; i < tree.vertices.size(); ++i)
      if (same_point(tree.vertices[i].point, pt, p)) return i;
    tree.vertices.push_back({pt, sigma_on_typeII(fm, pt)});
    return tree.vertices.size() - 1;
  };

  for (const Tip& t : maximal) {
    std::vector<Rational> radii = detail::path_breakpoints(fm, t.chart, t.x, Rational(0), t.rho);
    for (const Tip& o : maximal) {
      if (o.chart != t.chart) continue;
      ExtInt v = valuation(o.x - t.x, p);
      if (v.is_inf()) continue;
      Rational b = detail::rmin(Rational(v.value()), detail::rmin(t.rho, o.rho));
      if (sgn(b) > 0) radii.push_back(b);
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::size_t prev = 0;
    Rational prev_r(0);
    for (const Rational& r : radii) {
      if (sgn(r) == 0) continue;
      std::size_t cur = find_or_add(t.chart, t.x, r);
      bool known = false;
      for (const SpineEdge& e : tree.edges) known = known || (e.from == prev && e.to == cur);
      if (!known) tree.edges.push_back({prev, cur, (tree.vertices[cur].sigma - tree.vertices[prev].sigma) / (r - prev_r)});
      prev = cur;
      prev_r = r;
    }
  }
  return tree;
}

/// One linear piece of sigma_F along a path, parametrized by path length.
struct ProfilePiece {
  Rational s0, s1;          // path-length interval
  Rational sigma0, sigma1;  // sigma_F at its ends
  Rational slope() const { return (sigma1 - sigma0) / (s1 - s0); }
};

struct SigmaProfile {
  std::vector<ProfilePiece> pieces;
  std::vector<std::pair<Rational, Rational>> samples;  // (path length, sigma)
  Rational length;
};

/// sigma_F restricted to the geodesic from `a` to `b` (one chart, or either
/// end at the Gauss point). The path rises from a to the join point and
/// descends to b; breakpoints are exact.
inline SigmaProfile sigma_profile(const FactoredMap& fm, const TypeII& a, const TypeII& b, int samples = 0) {
  const Place& p = fm.place;
  if (!a.is_gauss() && !b.is_gauss() && a.chart != b.chart) throw PreconditionError("sigma_profile: path endpoints lie in different charts; split the path at the Gauss point");
  TypeII::Chart chart = a.is_gauss() ? b.chart : a.chart;
  FFElem ca = a.is_gauss() ? (b.is_gauss() ? FFElem() : b.center) : a.center;
  FFElem cb = b.is_gauss() ? ca : b.center;
  Rational ra = a.rho, rb = b.rho;
  ExtInt vab = valuation(ca - cb, p);
  Rational join = detail::rmin(ra, rb);
  if (!vab.is_inf()) join = detail::rmin(join, detail::rmax(Rational(vab.value()), Rational(0)));

  SigmaProfile prof;
  prof.length = (ra - join) + (rb - join);
  auto sig = [&](const FFElem& c, const Rational& r) {
    return sgn(r) == 0 ? sigma_on_typeII(fm, TypeII::gauss()) : sigma_on_typeII(fm, TypeII{chart, c, r});
  };
  // leg 1: from a up to the join (decreasing radius)
  std::vector<Rational> up = detail::path_breakpoints(fm, chart, ca, join, ra);
  for (std::size_t i = up.size(); i-- > 1;) {
    Rational s0 = ra - up[i], s1 = ra - up[i - 1];
    prof.pieces.push_back({s0, s1, sig(ca, up[i]), sig(ca, up[i - 1])});
  }
  std::vector<Rational> down = detail::path_breakpoints(fm, chart, cb, join, rb);
  for (std::size_t i = 0; i + 1 < down.size(); ++i) {
    Rational s0 = (ra - join) + (down[i] - join), s1 = (ra - join) + (down[i + 1] - join);
    prof.pieces.push_back({s0, s1, sig(cb, down[i]), sig(cb, down[i + 1])});
  }
  for (int k = 0; k < samples; ++k) {
    Rational s = samples == 1 ? Rational(0) : prof.length * ratio(k, samples - 1);
    Rational value;
    if (s <= ra - join) {
      value = sig(ca, ra - s);
    } else {
      value = sig(cb, join + (s - (ra - join)));
    }
    prof.samples.emplace_back(s, value);
  }
  return prof;
}

/// Outcome of checking whether f maps a Type II point to the Gauss point.
struct GaussPreimageResult {
  bool maps_to_gauss = false;
  int reduction_degree = 0;
  std::string reduction;   // reduced map on residue directions, in z
  std::string refutation;  // residue direction of the image when not Gauss
};

namespace detail {

/// Polynomial over the residue field Q[t]/(pi), coefficients as classes.
using ResPoly = std::vector<QPoly>;

inline void res_trim(ResPoly& a) {
  while (!a.empty() && a.back().is_zero_poly()) a.pop_back();
}

inline ResPoly res_mod(ResPoly a, const ResPoly& b, const QPoly& pi) {
  res_trim(a);
  QPoly inv = inverse_mod(b.back(), pi);
  while (a.size() >= b.size()) {
    QPoly q = (a.back() * inv) % pi;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] - q * b[i]) % pi;
    res_trim(a);
  }
  return a;
}

inline int res_gcd_degree(ResPoly a, ResPoly b, const QPoly& pi) {
  res_trim(a);
  res_trim(b);
  while (!b.empty()) {
    ResPoly r = res_mod(a, b, pi);
    a = std::move(b);
    b = std::move(r);
  }
  return static_cast<int>(a.size()) - 1;
}

inline std::string residue_poly_string(const std::vector<ResidueValue>& c) {
  // only used for Q-valued residues
  std::vector<Rational> q;
  for (const ResidueValue& r : c) q.push_back(r.rational);
  return qpoly_to_string(QPoly(q), "z");
}

}  // namespace detail

/// Conjugates so that zeta becomes the Gauss point (A(z) = center + pi^rho z),
/// reduces f o A and reports its degree. Degree >= 1 certifies f(zeta) = zeta0.
/// Fractional radii are supported at degree-one places and at infinity by
/// passing to the ramified parameter s with t = c + s^n (t = s^-n at infinity).
inline GaussPreimageResult gauss_preimage_verify(const HomogPair& F, const TypeII& zeta, const Place& p0) {
  HomogPair G = F;
  Place p = p0;
  FFElem center = zeta.center;
  Rational rho = zeta.rho;
  long n = rho.get_den().get_si();
  FFElem radius_factor;
  if (n > 1) {
    if (p0.degree() != 1) throw PreconditionError("fractional radii need a degree-one place or infinity");
    // substitute t -> c + s^n (or s^-n) and work at the place s
    FFElem sn = FFElem(QPoly::monomial(Rational(1), static_cast<std::size_t>(n)));
    FFElem sub = p0.is_infinity() ? sn.inverse() : FFElem(p0.root()) + sn;
    for (FFElem& c : G.P) c = c.substitute(sub);
    for (FFElem& c : G.Q) c = c.substitute(sub);
    center = center.substitute(sub);
    p = Place::t();
    radius_factor = FFElem::t().pow(rho.get_num().get_si());
  } else {
    radius_factor = p.uniformizer().pow(rho.get_num().get_si());
  }
  // A as a degree-one pair
  HomogPair A;
  if (zeta.is_gauss()) {
    A = HomogPair({FFElem(), FFElem(1)}, {FFElem(1), FFElem()});
  } else if (zeta.chart == TypeII::Chart::Unit) {
    A = HomogPair({center, radius_factor}, {FFElem(1), FFElem()});
  } else {
    A = HomogPair({FFElem(1), FFElem()}, {center, radius_factor});
  }
  HomogPair H = normalize_at(compose(G, A), p);
  const std::size_t d = static_cast<std::size_t>(H.d);
  std::vector<ResidueValue> rp, rq;
  for (std::size_t i = 0; i <= d; ++i) {
    rp.push_back(residue(H.P[i], p));
    rq.push_back(residue(H.Q[i], p));
  }
  GaussPreimageResult out;
  if (p.residue_field_is_q()) {
    std::vector<Rational> a, b;
    for (std::size_t i = 0; i <= d; ++i) {
      a.push_back(rp[i].rational);
      b.push_back(rq[i].rational);
    }
    QPoly pa(a), pb(b);
    int wa = pa.is_zero_poly() ? H.d : H.d - pa.degree(), wb = pb.is_zero_poly() ? H.d : H.d - pb.degree();
    QPoly g = (pa.is_zero_poly() || pb.is_zero_poly()) ? (pa.is_zero_poly() ? pb.monic() : pa.monic()) : gcd(pa, pb);
    int common = g.degree() + std::min(wa, wb);
    out.reduction_degree = H.d - common;
    QPoly na = pa.is_zero_poly() ? pa : pa / g, nb = pb.is_zero_poly() ? pb : pb / g;
    if (out.reduction_degree >= 1) {
      out.maps_to_gauss = true;
      out.reduction = "(" + qpoly_to_string(na, "z") + ")/(" + qpoly_to_string(nb, "z") + ")";
    } else if (nb.is_zero_poly()) {
      out.refutation = "inf";
    } else {
      out.refutation = to_string(Rational(na.coeff(0) / nb.coeff(0)));
    }
  } else {
    detail::ResPoly a, b;
    for (std::size_t i = 0; i <= d; ++i) {
      a.push_back(rp[i].cls);
      b.push_back(rq[i].cls);
    }
    detail::ResPoly ta = a, tb = b;
    detail::res_trim(ta);
    detail::res_trim(tb);
    int da = static_cast<int>(ta.size()) - 1, db = static_cast<int>(tb.size()) - 1;
    int wa = ta.empty() ? H.d : H.d - da, wb = tb.empty() ? H.d : H.d - db;
    int gdeg = ta.empty() ? db : (tb.empty() ? da : detail::res_gcd_degree(ta, tb, p.pi()));
    out.reduction_degree = H.d - (gdeg + std::min(wa, wb));
    out.maps_to_gauss = out.reduction_degree >= 1;
    if (out.maps_to_gauss) {
      out.reduction = "degree " + std::to_string(out.reduction_degree) + " over Q[t]/(" + qpoly_to_string(p.pi()) + ")";
    } else {
      out.refutation = "constant residue class";
    }
  }
  return out;
}

}  // namespace qth
