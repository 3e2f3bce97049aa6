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

#include <string>
#include <vector>

#include <json.hpp>

#include "qth/dioph.hpp"
#include "qth/heights.hpp"
#include "qth/itinerary.hpp"
#include "qth/lattes.hpp"
#include "qth/quadratic.hpp"
#include "qth/spine.hpp"

// JSON views of the result types. Rationals are strings "p/q" so that no
// precision is lost; infinite valuations are the string "inf".

namespace qth::report {

using json = nlohmann::ordered_json;

inline json rat(const Rational& q) { return to_string(q); }

template <class T>
json ext(const Ext<T>& x) {
  return x.str();
}

inline json enclosure(const Enclosure& e) { return json{{"lo", rat(e.lo)}, {"hi", rat(e.hi)}}; }

/// {"exact": "p/q"} for certified values, the enclosure otherwise.
inline json height_value(bool exact, const Rational& v, const Enclosure& e) {
  return exact ? json{{"exact", rat(v)}} : enclosure(e);
}

inline json certificate(const Certificate& c) {
  json j{{"kind", c.kind_name()}};
  switch (c.kind) {
    case Certificate::Kind::ExactPreperiodic:
      j["preperiod"] = c.preperiod;
      j["period"] = c.period;
      j["eta"] = rat(c.eta);
      break;
    case Certificate::Kind::ZeroTail:
      j["n0"] = c.n0;
      j["reason"] = c.reason;
      j["eta"] = rat(c.eta);
      break;
    case Certificate::Kind::EnclosureOnly:
      break;
  }
  j["detail"] = c.detail;
  return j;
}

inline json local_height(const LocalHeightResult& r) {
  return json{{"place", r.place.str()},
              {"exact", r.exact},
              {"value", height_value(r.exact, r.value, r.enclosure)},
              {"enclosure", enclosure(r.enclosure)},
              {"certificate", certificate(r.certificate)},
              {"digits", r.digits},
              {"normalization_scalar", r.normalization_scalar.str()}};
}

inline json global_height(const GlobalHeightResult& r) {
  json places = json::array();
  for (const PlaceHeight& ph : r.places)
    places.push_back(json{{"place", ph.place.str()}, {"degree", ph.place.degree()}, {"local", local_height(ph.local)}});
  return json{{"exact", r.exact},
              {"value", height_value(r.exact, r.value, r.enclosure)},
              {"enclosure", enclosure(r.enclosure)},
              {"places", places}};
}

inline json type2(const TypeII& z) {
  if (z.is_gauss()) return json{{"point", "zeta0"}, {"chart", "unit"}, {"center", "0"}, {"rho", "0"}};
  return json{{"point", z.str()},
              {"chart", z.chart == TypeII::Chart::Unit ? "unit" : "infinity"},
              {"center", z.center.str()},
              {"rho", rat(z.rho)}};
}

inline json profile(const SigmaProfile& p) {
  json pieces = json::array();
  for (const ProfilePiece& q : p.pieces)
    pieces.push_back(json{{"s0", rat(q.s0)}, {"s1", rat(q.s1)}, {"sigma0", rat(q.sigma0)}, {"sigma1", rat(q.sigma1)}, {"slope", rat(q.slope())}});
  return json{{"length", rat(p.length)}, {"pieces", pieces}};
}

/// Vertices, edges, leaves and the sigma profile from the Gauss point to
/// every leaf.
inline json spine(const SpineTree& t, const FactoredMap& fm) {
  json verts = json::array(), edges = json::array(), leaves = json::array(), profiles = json::array();
  std::vector<int> out_degree(t.vertices.size(), 0);
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    json v = type2(t.vertices[i].point);
    v["id"] = i;
    v["sigma"] = rat(t.vertices[i].sigma);
    verts.push_back(v);
  }
  for (const SpineEdge& e : t.edges) {
    edges.push_back(json{{"from", e.from}, {"to", e.to}, {"slope", rat(e.slope)}});
    ++out_degree[e.from];
  }
  for (std::size_t i = 1; i < t.vertices.size(); ++i)
    if (out_degree[i] == 0) {
      leaves.push_back(i);
      json pr = profile(sigma_profile(fm, TypeII::gauss(), t.vertices[i].point));
      pr["to"] = i;
      profiles.push_back(pr);
    }
  return json{{"place", t.place.str()}, {"vertices", verts}, {"edges", edges}, {"leaves", leaves}, {"profiles", profiles}};
}

inline json classification(const QuadClass& c) {
  json vals = json::array(), res = json::array(), known = json::array();
  for (const auto& v : c.valuations) vals.push_back(ext(v));
  for (const auto& r : c.residues) res.push_back(rat(r));
  for (const auto& k : c.multipliers.known) known.push_back(k.str());
  return json{{"class", c.kind_name()},
              {"kiwi_case", c.kiwi_case == 0 ? json(nullptr) : json(c.kiwi_case)},
              {"multipliers", json{{"s1", c.multipliers.s1.str()},
                                   {"s2", c.multipliers.s2.str()},
                                   {"s3", c.multipliers.s3.str()},
                                   {"known", known},
                                   {"conjugation", c.multipliers.conjugation.str()}}},
              {"valuations", vals},
              {"residues", res},
              {"tau_squared", c.tau_squared ? rat(*c.tau_squared) : json(nullptr)},
              {"tau_infinite", c.tau_infinite},
              {"reason", c.reason}};
}

inline json tent_states(const std::vector<TentState>& s) {
  json a = json::array();
  for (const TentState& x : s) a.push_back(x.str());
  return a;
}

inline json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const Rational& q : v) a.push_back(rat(q));
  return a;
}

inline json lattes(const LattesHeight& h) {
  return json{{"value", json{{"exact", rat(h.value)}}},
              {"eta", rat(h.eta)},
              {"preperiod", h.preperiod},
              {"period", h.period},
              {"digits", rationals(h.digits)},
              {"states", tent_states(h.states)}};
}

inline json tent(const TentOrbit& o) {
  return json{{"preperiod", o.preperiod},
              {"period", o.period},
              {"conditional", o.conditional},
              {"eta", rat(o.eta)},
              {"digits", rationals(o.digits)},
              {"states", tent_states(o.states)}};
}

inline json itinerary(const ItineraryResult& r, int digits = 30) {
  json chain = json::array();
  for (const ChainDisk& c : r.chain) chain.push_back(json{{"center", c.center.str(digits)}, {"rho", rat(c.rho)}});
  return json{{"bits", r.bits},
              {"verified", r.verified},
              {"verified_digits", r.digits},
              {"point", r.point_infinite ? json("inf") : json(r.point.str(digits))},
              {"exact_point", r.exact ? json(r.exact->str()) : json(nullptr)},
              {"chain", chain}};
}

inline json target(const TargetResult& t, int digits = 30) {
  json j{{"alpha", rat(t.alpha)}, {"depth", t.N}, {"enclosure", enclosure(t.enclosure)}, {"realization", itinerary(t.realization, digits)}};
  if (t.witness)
    j["witness"] = json{{"point", t.witness->str()}, {"height", local_height(*t.witness_height)}};
  else
    j["witness"] = nullptr;
  return j;
}

inline json orbit_check(const OrbitCheck& c) {
  return json{{"infinite", c.infinite}, {"proved", c.proved}, {"method", c.method}, {"steps", c.steps}};
}

inline json pairs(const std::vector<std::pair<long, long>>& v) {
  json a = json::array();
  for (const auto& [m, n] : v) a.push_back(json::array({m, n}));
  return a;
}

inline json equal_solutions(const EqualSolutions& s) {
  json j{{"dependent", s.dependent}, {"solutions", pairs(s.solutions)}};
  if (s.family)
    j["family"] = json{{"m0", s.family->m0}, {"n0", s.family->n0}, {"dm", s.family->dm}, {"dn", s.family->dn}};
  else
    j["family"] = nullptr;
  return j;
}

inline json intersections(const IntersectionResult& r) {
  return json{{"solutions", pairs(r.solutions)},
              {"attained", rationals(r.attained)},
              {"m_bound", r.m_bound},
              {"n_bound", r.n_bound},
              {"rigorous", r.rigorous},
              {"bound_kind", r.bound_kind}};
}

}  // namespace qth::report
