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
// qth: command-line front end. Every command prints one JSON document (or a
// flattened text view) and exits with 0 on success, 2 on parse or
// precondition errors and 3 when a resource cap or precision budget is hit.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qth/qth.hpp"
#include "qth/report.hpp"

namespace {

using qth::report::json;

struct RunConfig {
  std::string format = "json";
  std::string place = "t";
  int depth = 20;
  int max_iter = 24;
  std::string cutoff = "24";
  double tol = 1e-40;
  unsigned bits = 256;
  std::uint64_t seed = 1;
  int digits = 30;
};

// QTH_PRECISION="cutoff=32,bits=512,tol=1e-50" overrides the defaults; the
// command-line flags override the environment.
void apply_precision_env(RunConfig& cfg) {
  const char* env = std::getenv("QTH_PRECISION");
  if (!env) return;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw qth::PreconditionError("QTH_PRECISION entries must be key=value, got '" + item + "'");
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    try {
      if (k == "cutoff")
        cfg.cutoff = v;
      else if (k == "bits")
        cfg.bits = static_cast<unsigned>(std::stoul(v));
      else if (k == "tol")
        cfg.tol = std::stod(v);
      else
        throw qth::PreconditionError("unknown QTH_PRECISION key '" + k + "'");
    } catch (const std::logic_error&) {
      throw qth::PreconditionError("bad QTH_PRECISION value '" + item + "'");
    }
  }
}

qth::PrecisionBudget budget_of(const RunConfig& cfg) {
  qth::PrecisionBudget b;
  b.cutoff = qth::parse_rational(cfg.cutoff);
  if (b.cutoff <= 0) throw qth::PreconditionError("cutoff must be positive");
  if (!(cfg.tol > 0)) throw qth::PreconditionError("tol must be positive");
  b.tol = cfg.tol;
  if (cfg.bits < 32) throw qth::PreconditionError("float bits must be at least 32");
  if (cfg.bits > 65536) throw qth::ResourceCapError("float bits above 65536 are not supported");
  b.bits = cfg.bits;
  return b;
}

qth::HeightOptions height_options(const RunConfig& cfg) {
  if (cfg.depth < 1) throw qth::PreconditionError("depth must be at least 1");
  qth::HeightOptions o;
  o.depth = cfg.depth;
  o.max_iter = cfg.max_iter;
  return o;
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const RunConfig& cfg, const json& doc, std::ostream& out) {
  if (cfg.format == "text")
    flatten(doc, "", out);
  else
    out << doc.dump(2) << "\n";
}

int exit_code_for(const char* kind) {
  std::string k(kind);
  if (k == "resource_cap" || k == "newton") return 3;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical heights of rational maps over Q(t)"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  bool env_error = false;
  std::string env_message;
  try {
    apply_precision_env(cfg);
  } catch (const qth::Error& e) {
    env_error = true;
    env_message = e.what();
  }
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--cutoff", cfg.cutoff, "Series truncation order (rational)");
  app.add_option("--tol", cfg.tol, "Coefficient tolerance for series arithmetic");
  app.add_option("--float-bits", cfg.bits, "Binary precision of floating coefficients");
  app.add_option("--seed", cfg.seed, "Seed for randomized steps");
  app.add_option("--digits", cfg.digits, "Significant digits when printing series coefficients");

  std::string map_text, point_text, g_text, bits_text, alpha_text, tent_text, u_text, p_text;
  std::string h1 = "1", h2 = "1", c_text = "0";
  long d = 2, e = 3, horizon = 64;

  auto* hl = app.add_subcommand("height-local", "Local canonical height at one place");
  hl->add_option("--map", map_text, "Rational map in z over Q(t)")->required();
  hl->add_option("--point", point_text, "Point in Q(t) or inf")->required();
  hl->add_option("--place", cfg.place, "Place: irreducible polynomial in t, or inf");
  hl->add_option("--depth", cfg.depth, "Digits used for enclosures");
  hl->add_option("--max-iter", cfg.max_iter, "Orbit steps searched for an exact certificate");

  auto* hg = app.add_subcommand("height-global", "Global canonical height as a sum of local heights");
  hg->add_option("--map", map_text, "Rational map in z over Q(t)")->required();
  hg->add_option("--point", point_text, "Point in Q(t)")->required();
  hg->add_option("--depth", cfg.depth, "Digits used for enclosures");
  hg->add_option("--max-iter", cfg.max_iter, "Orbit steps searched for an exact certificate");

  auto* sp = app.add_subcommand("spine", "Spine tree of the order function");
  sp->add_option("--map", map_text, "Rational map in z over Q(t)")->required();
  sp->add_option("--place", cfg.place, "Place");

  auto* cl = app.add_subcommand("classify", "Degree-2 trichotomy");
  cl->add_option("--map", map_text, "Quadratic map");
  cl->add_option("--place", cfg.place, "Place");
  cl->add_option("--u", u_text, "With --p: use the attracting normal form and report its coding disks");
  cl->add_option("--p", p_text, "Pole parameter of the attracting normal form");

  auto* la = app.add_subcommand("lattes", "Lattes map: exact heights and tent orbits");
  la->add_option("--point", point_text, "Point in Q(t)");
  la->add_option("--tent", tent_text, "Rational r in [0, 1]: tent orbit with generic residues");
  la->add_option("--depth", cfg.depth, "Also report the generic enclosure at this depth");

  auto* it = app.add_subcommand("itinerary", "Points with prescribed spine digits");
  it->add_option("--map", map_text, "Map g(z)(z-t)/(z+t)");
  it->add_option("--g", g_text, "Base map g over Q (default z+1)");
  it->add_option("--alpha", alpha_text, "Target height in [-1, 0]");
  it->add_option("--bits", bits_text, "Digit prefix as a 0/1 string");
  it->add_option("--depth", cfg.depth, "Number of digits");

  auto* oi = app.add_subcommand("orbit-intersect", "Solutions of |d^m H1 - e^n H2| <= C");
  oi->add_option("--h1", h1, "Height H1 > 0")->required();
  oi->add_option("--h2", h2, "Height H2 > 0")->required();
  oi->add_option("-d", d, "Degree d >= 2")->required();
  oi->add_option("-e", e, "Degree e >= 2")->required();
  oi->add_option("-C", c_text, "Bound C >= 0");
  oi->add_option("--horizon", horizon, "Search horizon in m when no proved bound exists");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    // usage errors still get a structured report on stdout
    std::cerr << err.what() << "\n";
    json doc{{"schema", 1}, {"command", nullptr}, {"ok", false},
             {"error", json{{"kind", "usage"}, {"message", err.what()}, {"exit_code", 2}}}};
    emit(cfg, doc, std::cout);
    return 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  json doc;
  doc["schema"] = 1;
  doc["command"] = command;
  try {
    if (env_error) throw qth::PreconditionError(env_message);
    qth::PrecisionBudget budget = budget_of(cfg);
    qth::PrecisionScope scope(budget.bits);
    json result;
    if (command == "height-local") {
      qth::HomogPair F = qth::parse_map(map_text);
      qth::Place pl = qth::parse_place(cfg.place);
      qth::ProjPoint a = qth::parse_point(point_text);
      result = qth::report::local_height(qth::local_height(F, a, pl, height_options(cfg)));
      result["map"] = qth::map_to_string(F);
      result["point"] = a.str();
    } else if (command == "height-global") {
      qth::HomogPair F = qth::parse_map(map_text);
      qth::ProjPoint a = qth::parse_point(point_text);
      result = qth::report::global_height(qth::global_height(F, a, height_options(cfg)));
      result["map"] = qth::map_to_string(F);
      result["point"] = a.str();
    } else if (command == "spine") {
      qth::HomogPair F = qth::parse_map(map_text);
      qth::FactoredMap fm = qth::factor_map(F, qth::parse_place(cfg.place));
      result = qth::report::spine(qth::build_spine(fm), fm);
      result["map"] = qth::map_to_string(F);
    } else if (command == "classify") {
      qth::Place pl = qth::parse_place(cfg.place);
      if (!u_text.empty() || !p_text.empty()) {
        if (u_text.empty() || p_text.empty()) throw qth::PreconditionError("--u and --p go together");
        qth::HomogPair F = qth::attracting_normal_form(qth::parse_ffelem(u_text), qth::parse_point(p_text));
        qth::CantorCoding cc = qth::cantor_coding(F, pl);
        result = qth::report::classification(qth::classify(F, pl, cfg.seed));
        result["map"] = qth::map_to_string(F);
        result["coding"] = json{{"d0", qth::report::type2(cc.d0.disk)},
                                {"d1", qth::report::type2(cc.d1.disk)},
                                {"sigma0", qth::report::rat(cc.d0.sigma)},
                                {"sigma1", qth::report::rat(cc.d1.sigma)},
                                {"equal", cc.equal},
                                {"pole_criterion_equal", cc.lemma_equal},
                                {"direct_equal", cc.direct_equal}};
      } else {
        if (map_text.empty()) throw qth::PreconditionError("classify needs --map, or --u with --p");
        qth::HomogPair F = qth::parse_map(map_text);
        result = qth::report::classification(qth::classify(F, pl, cfg.seed));
        result["map"] = qth::map_to_string(F);
      }
    } else if (command == "lattes") {
      if (point_text.empty() == tent_text.empty()) throw qth::PreconditionError("lattes needs exactly one of --point or --tent");
      if (!tent_text.empty()) {
        result = qth::report::tent(qth::tent_orbit(qth::parse_rational(tent_text)));
        result["r0"] = qth::report::rat(qth::parse_rational(tent_text));
      } else {
        qth::ProjPoint a = qth::parse_point(point_text);
        result = qth::report::lattes(qth::lattes_local_height(a));
        result["point"] = a.str();
        if (la->count("--depth") > 0) {
          qth::HomogPair F = qth::lattes_map();
          qth::EtaEnclosure ee = qth::eta_enclosure(F, a, qth::Place::t(), cfg.depth);
          qth::Rational shift = qth::scaling_shift(F, qth::normalizing_scalar(F, qth::Place::t()), qth::Place::t());
          long va = a.affine().is_zero() ? 0 : std::min(0L, qth::val(a.affine(), qth::Place::t()));
          qth::Enclosure lam{-ee.eta.hi - qth::Rational(va) + shift, -ee.eta.lo - qth::Rational(va) + shift};
          result["generic_enclosure"] = json{{"depth", cfg.depth}, {"lambda", qth::report::enclosure(lam)}, {"eta", qth::report::enclosure(ee.eta)}};
        }
      }
    } else if (command == "itinerary") {
      if (!map_text.empty() && !g_text.empty()) throw qth::PreconditionError("give --map or --g, not both");
      qth::FamilyMap fam = !map_text.empty() ? qth::family_from_map(map_text) : qth::build_family(g_text.empty() ? "z+1" : g_text);
      if (alpha_text.empty() == bits_text.empty()) throw qth::PreconditionError("itinerary needs exactly one of --alpha or --bits");
      if (!alpha_text.empty()) {
        if (cfg.depth < 1) throw qth::PreconditionError("depth must be at least 1");
        result = qth::report::target(qth::target_alpha(fam, qth::parse_rational(alpha_text), cfg.depth, budget), cfg.digits);
      } else {
        std::vector<int> bits;
        for (char c : bits_text) {
          if (c != '0' && c != '1') throw qth::PreconditionError("--bits must be a string of 0 and 1");
          bits.push_back(c - '0');
        }
        result = qth::report::itinerary(qth::realize_itinerary(fam, bits, budget), cfg.digits);
      }
      result["map"] = qth::map_to_string(fam.F);
      result["g"] = fam.g_text;
      result["orbit_check"] = qth::report::orbit_check(fam.check);
    } else if (command == "orbit-intersect") {
      qth::IntersectionInstance in{qth::parse_rational(h1), qth::parse_rational(h2), d, e, qth::parse_rational(c_text)};
      qth::MultDependence dep = qth::mult_independent(d, e);
      result["h1"] = qth::report::rat(in.H1);
      result["h2"] = qth::report::rat(in.H2);
      result["d"] = d;
      result["e"] = e;
      result["C"] = qth::report::rat(in.C);
      result["independent"] = dep.independent;
      result["dependence"] = dep.independent ? json(nullptr) : json{{"k", dep.k}, {"l", dep.l}};
      result["equal"] = qth::report::equal_solutions(qth::solve_equal(in.H1, in.H2, d, e));
      result["bounded"] = dep.independent ? qth::report::intersections(qth::bounded_intersections(in, horizon)) : json(nullptr);
    }
    doc["ok"] = true;
    doc["result"] = result;
    emit(cfg, doc, std::cout);
    return 0;
  } catch (const qth::Error& err) {
    doc["ok"] = false;
    doc["error"] = json{{"kind", err.kind()}, {"message", err.what()}, {"exit_code", exit_code_for(err.kind())}};
    emit(cfg, doc, std::cout);
    return exit_code_for(err.kind());
  } catch (const std::exception& err) {
    doc["ok"] = false;
    doc["error"] = json{{"kind", "internal"}, {"message", err.what()}, {"exit_code", 2}};
    emit(cfg, doc, std::cout);
    return 2;
  }
}
