#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sigman/registry.hpp"
#include "sigman/scenario.hpp"

using namespace sigman;
using namespace sigman::testing;

namespace {

// Bases A and B in one division; A has `a` locations, B has `b`. One
// per-location task of `hours` gang-hours, crew 2.
Dataset pair_dataset(int a, int b, double hours) {
  Dataset ds;
  ds.divisions["D"] = Division{"D", std::string("BB")};
  ds.bases["AA"] = make_base("AA", "D");
  ds.bases["BB"] = make_base("BB", "D");
  ds.bases["AA"].adjacent_bases = {"BB"};
  ds.bases["BB"].adjacent_bases = {"AA"};
  ds.bases["AA"].yards = {"A Yard"};
  for (int i = 0; i < a + b; ++i) {
    auto l = make_location("L" + std::to_string(i), i < a ? "AA" : "BB", "D", LocationType::CodePoint);
    ds.locations[l.id] = l;
  }
  NbnttTaskSpec t;
  t.description = "Location Upkeep";
  t.per_each = PerEach::Location;
  t.annual_occurrences = 1;
  t.work_hours = hours;
  t.crew = 2;
  ds.tasks = {t};
  return ds;
}

}  // namespace

TEST_CASE("close_base moves locations; yards and the tower unit count at the receiver") {
  const Dataset ds = pair_dataset(2, 3, 10);
  const Dataset closed = close_base(ds, "AA");
  CHECK(closed.base("AA").closed_into == std::optional<BaseId>("BB"));
  CHECK(closed.responsible_base("AA") == "BB");
  for (const auto& [id, l] : closed.locations) CHECK(l.base == "BB");
  CHECK(closed.location("L0").origin_base == std::optional<BaseId>("AA"));
  CHECK_FALSE(closed.location("L4").origin_base);
  CHECK(count_units(closed, PerEach::Yard).counts == std::map<BaseId, int>{{"BB", 1}});
  CHECK(count_units(closed, PerEach::MaintBase).counts == std::map<BaseId, int>{{"BB", 2}});
  CHECK(count_units(closed, PerEach::Division).counts == std::map<BaseId, int>{{"BB", 1}});
}

TEST_CASE("task scopes still select the closed base's units") {
  Dataset ds = pair_dataset(2, 3, 10);
  ds.divisions["E"] = Division{"E", std::string("CC")};
  ds.bases["CC"] = make_base("CC", "E");
  ds.bases["AA"].adjacent_bases = {"CC", "BB"};
  const Dataset closed = close_base(ds, "AA");
  REQUIRE(closed.base("AA").closed_into == std::optional<BaseId>("CC"));
  // Scoped to the closed base or its old division, the units follow the work to CC.
  CHECK(count_units(closed, PerEach::Location, {"AA"}).counts == std::map<BaseId, int>{{"CC", 2}});
  CHECK(count_units(closed, PerEach::Location, {"D"}).counts == std::map<BaseId, int>{{"BB", 3}, {"CC", 2}});
  CHECK(count_units(closed, PerEach::Location, {"CC"}).counts.empty());
  CHECK(count_units(closed, PerEach::Yard, {"D"}).counts == std::map<BaseId, int>{{"CC", 1}});
  CHECK(count_units(closed, PerEach::MaintBase, {"D"}).counts == std::map<BaseId, int>{{"BB", 1}, {"CC", 1}});
  for (PerEach u : {PerEach::Location, PerEach::Yard, PerEach::MaintBase, PerEach::Division}) {
    for (const std::vector<std::string>& scope : {std::vector<std::string>{}, {"AA"}, {"D"}, {"E"}, {"BB", "E"}}) {
      CHECK(count_units(closed, u, scope).total() == count_units(ds, u, scope).total());
    }
  }
}

TEST_CASE("closing a base shifts its FTE to the receiver") {
  const Dataset ds = pair_dataset(6, 17, 208.8);
  const EngineConfig c = lossless_config();
  const ScenarioResult r = scenario_close_location(ds, "AA", c);
  const auto& before = r.before.coverage.allotment;
  const auto& after = r.after.coverage.allotment;
  CHECK(before.fte.at({"AA", Craft::Maintainer}) == doctest::Approx(1.2));
  CHECK(before.fte.at({"BB", Craft::Maintainer}) == doctest::Approx(3.4));
  CHECK(after.fte.at({"BB", Craft::Maintainer}) == doctest::Approx(3.4 + 1.2));
  CHECK(after.total() <= before.total());
  CHECK(r.receiver == "BB");
  CHECK(oracle::close(r.after.demand_man_hours(), r.before.demand_man_hours()));
}

TEST_CASE("closing an idle base changes nothing else") {
  Dataset ds = pair_dataset(0, 4, 100);
  const ScenarioResult r = scenario_close_location(ds, "AA", lossless_config());
  CHECK(r.after.coverage.allotment.total() == r.before.coverage.allotment.total());
  CHECK(r.after.coverage.allotment.positions_for("BB", Craft::Maintainer) ==
        r.before.coverage.allotment.positions_for("BB", Craft::Maintainer));
}

TEST_CASE("closure errors") {
  Dataset ds = pair_dataset(1, 1, 10);
  const Dataset once = close_base(ds, "AA");
  CHECK_THROWS_AS(close_base(once, "AA"), ConfigError);
  CHECK_THROWS_AS(close_base(once, "BB"), ConfigError);  // its only neighbour is closed
  CHECK_THROWS_AS(close_base(ds, "ZZ"), ReferenceError);
  ds.bases["AA"].adjacent_bases.clear();
  CHECK_THROWS_AS(close_base(ds, "AA"), ConfigError);
}

TEST_CASE("sample closure conserves demand and writes deltas") {
  const Dataset ds = load_dataset(sample_manifest());
  const EngineConfig c = EngineConfig::read(sample_config());
  const ScenarioResult r = scenario_close_location(ds, "NK", c);
  CHECK(oracle::close(r.after.demand_man_hours(), r.before.demand_man_hours()));

  std::ostringstream delta, text;
  write_scenario_delta_csv(delta, r);
  write_scenario_text(text, r);
  CHECK(delta.str().rfind("table,scope,craft,before,after,delta\n", 0) == 0);
  CHECK(delta.str().find("demand_man_hours,system") != std::string::npos);
  CHECK(text.str().find("response times") != std::string::npos);
}

TEST_CASE("payroll of a closed base moves to the receiver") {
  Dataset ds = pair_dataset(1, 1, 10);
  ds.payroll = PayrollSnapshot{{{{"AA", Craft::Maintainer}, 2}, {{"BB", Craft::Maintainer}, 3}, {{"AA", Craft::Inspector}, 1}}};
  const Dataset closed = close_base(ds, "AA");
  REQUIRE(closed.payroll);
  CHECK(closed.payroll->counts ==
        std::map<CellKey, int>{{{"BB", Craft::Maintainer}, 5}, {{"BB", Craft::Inspector}, 1}});
}
