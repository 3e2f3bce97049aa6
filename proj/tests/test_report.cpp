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
#include <gtest/gtest.h>

#include "qth/qth.hpp"
#include "qth/report.hpp"

namespace qth {
namespace {

using report::json;

TEST(Report, RationalsAreExactStrings) {
  EXPECT_EQ(report::rat(Rational(-2, 3)), json("-2/3"));
  EXPECT_EQ(report::rat(Rational(5)), json("5"));
  EXPECT_EQ(report::ext(ExtRational::infinity()), json("inf"));
  json e = report::enclosure({Rational(1, 2), Rational(3, 4)});
  EXPECT_EQ(e["lo"], "1/2");
  EXPECT_EQ(e["hi"], "3/4");
}

TEST(Report, LocalHeightCarriesCertificate) {
  json j = report::local_height(local_height(parse_map("((z+1)*(z-t))/(z+t)"), parse_point("0"), Place::t()));
  EXPECT_EQ(j["exact"], true);
  EXPECT_EQ(j["value"], json({{"exact", "-2/3"}}));
  EXPECT_EQ(j["certificate"]["kind"], "ExactPreperiodic");
  EXPECT_EQ(j["certificate"]["preperiod"], 0);
  EXPECT_EQ(j["certificate"]["period"], 2);
  EXPECT_EQ(j["certificate"]["eta"], "2/3");
  EXPECT_EQ(j["digits"], json::array({1, 0}));
}

TEST(Report, InexactHeightHasNullValue) {
  HeightOptions opt;
  opt.max_iter = 1;
  json j = report::local_height(local_height(parse_map("((z+1)*(z-t))/(z+t)"), parse_point("0"), Place::t(), opt));
  EXPECT_EQ(j["exact"], false);
  EXPECT_TRUE(j["value"].contains("lo") && j["value"].contains("hi"));
  EXPECT_FALSE(j["value"].contains("exact"));
  EXPECT_EQ(j["certificate"]["kind"], "EnclosureOnly");
}

TEST(Report, SpineExampleOne) {
  FactoredMap fm = factor_map(parse_map("(z^2-t^2)/z"), Place::t());
  json j = report::spine(build_spine(fm), fm);
  ASSERT_EQ(j["vertices"].size(), 2u);
  EXPECT_EQ(j["vertices"][0]["point"], "zeta0");
  EXPECT_EQ(j["vertices"][0]["sigma"], "0");
  EXPECT_EQ(j["vertices"][1]["center"], "0");
  EXPECT_EQ(j["vertices"][1]["rho"], "2");
  EXPECT_EQ(j["vertices"][1]["sigma"], "2");
  EXPECT_EQ(j["leaves"], json::array({1}));
  ASSERT_EQ(j["profiles"].size(), 1u);
  EXPECT_EQ(j["profiles"][0]["length"], "2");
}

TEST(Report, ClassificationFields) {
  json j = report::classification(classify(parse_map("(z+1)*(z-t)/(z+t)"), Place::t()));
  EXPECT_EQ(j["class"], "IrrationalExists");
  EXPECT_EQ(j["kiwi_case"], 2);
  EXPECT_EQ(j["valuations"].size(), 3u);
  json g = report::classification(classify(parse_map("(z^2-t^2)/z"), Place::t()));
  EXPECT_TRUE(g["kiwi_case"].is_null());
}

TEST(Report, TentAndLattes) {
  json o = report::tent(tent_orbit(Rational(1, 5)));
  EXPECT_EQ(o["preperiod"], 1);
  EXPECT_EQ(o["period"], 2);
  EXPECT_EQ(o["states"], json::array({"1/5", "2/5", "4/5"}));
  json l = report::lattes(lattes_local_height(parse_point("t")));
  EXPECT_EQ(l["value"]["exact"], "-1/2");
}

TEST(Report, IntersectionsArePairs) {
  json j = report::intersections(bounded_intersections({Rational(1), Rational(1), 2, 3, Rational(1)}));
  EXPECT_EQ(j["solutions"][0], json::array({0, 0}));
  EXPECT_EQ(j["rigorous"], false);
  EXPECT_EQ(j["bound_kind"], "search-horizon");
  json s = report::equal_solutions(solve_equal(Rational(1), Rational(1), 2, 4));
  EXPECT_EQ(s["family"]["dm"], 2);
  EXPECT_EQ(s["family"]["dn"], 1);
}

TEST(Report, ItineraryAndTarget) {
  FamilyMap fam = build_family("z+1");
  json j = report::target(target_alpha(fam, Rational(-2, 3), 6));
  EXPECT_EQ(j["alpha"], "-2/3");
  EXPECT_EQ(j["realization"]["verified"], true);
  EXPECT_EQ(j["realization"]["verified_digits"], json::array({1, 0, 1, 0, 1, 0}));
  EXPECT_EQ(j["witness"]["point"], "0");
  EXPECT_EQ(report::orbit_check(fam.check)["proved"], true);
}

TEST(Report, OutputIsDeterministic) {
  auto render = [] {
    FactoredMap fm = factor_map(parse_map("z*(z-t)/t^3"), Place::t());
    return report::spine(build_spine(fm), fm).dump();
  };
  EXPECT_EQ(render(), render());
}

}  // namespace
}  // namespace qth
