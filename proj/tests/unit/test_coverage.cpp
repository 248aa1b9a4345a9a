#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sigman/coverage.hpp"

using namespace sigman;
using namespace sigman::testing;

namespace {

GangHours gh(double hours, Category cat, Craft craft = Craft::Maintainer, const BaseId& base = "AA") {
  GangHours g;
  g.hours = hours;
  g.base = base;
  g.craft = craft;
  g.category = cat;
  return g;
}

PfnwProfile pfnw(double days) { return PfnwProfile{{{"vacation", days}}}; }

Dataset two_division_network() {
  Dataset ds;
  ds.divisions["North"] = Division{"North", std::nullopt};
  for (const char* b : {"DV", "CA", "PS"}) ds.bases[b] = make_base(b, "North");
  return ds;
}

}  // namespace

TEST_CASE("aggregate_demand") {
  const CrewMatrix crew = CrewMatrix::uniform(2);
  CHECK(aggregate_demand({{gh(100, Category::FRA)}}, crew).at({"AA", Craft::Maintainer}) == 200.0);

  GangHours trouble = gh(40, Category::Trouble);
  trouble.offpeak_share = 0.5;
  const auto m = aggregate_demand({{gh(100, Category::FRA)}, {trouble}, {gh(30, Category::NbnTT)}}, crew);
  CHECK(m.at({"AA", Craft::Maintainer}) == doctest::Approx(300.0));

  CHECK(aggregate_demand({}, crew).empty());
  CHECK_THROWS_AS(aggregate_demand({{gh(1, Category::FRA)}}, CrewMatrix{}), ConfigError);
}

TEST_CASE("productive_hours") {
  MaintenanceBase dv = make_base("DV", "North", 0.56);
  CHECK(productive_hours(pfnw(32), dv, 8.0) == doctest::Approx(1025.92));
  CHECK(productive_hours(pfnw(30), dv, 8.0) == doctest::Approx(1034.88));
  CHECK(productive_hours(PfnwProfile{}, make_base("X", "N", 1.0), 8.0) == doctest::Approx(2088.0));
  CHECK_THROWS_AS(productive_hours(pfnw(261), dv, 8.0), ConfigError);
  CHECK_THROWS_AS(productive_hours(pfnw(0), make_base("X", "N", 0.0), 8.0), ConfigError);
}

TEST_CASE("compute_fte") {
  CHECK(compute_fte(4822, 1025) == doctest::Approx(4.70).epsilon(0.01 / 4.70));
  CHECK(std::abs(compute_fte(9101, 1054) - 8.64) <= 0.01);
  CHECK(compute_fte(0, 1000) == 0.0);
  CHECK_THROWS_AS(compute_fte(10, 0), ConfigError);
  CHECK_THROWS_AS(compute_fte(10, -3), ConfigError);
}

TEST_CASE("allot_positions examples") {
  const Dataset ds = two_division_network();
  EngineConfig c = lossless_config();
  const AllotmentTable a = allot_positions({{{"DV", Craft::Maintainer}, 4.70},
                                            {{"CA", Craft::Maintainer}, 11.59},
                                            {{"CA", Craft::Inspector}, 0.79},
                                            {{"PS", Craft::Inspector}, 1.95},
                                            {{"PS", Craft::TestMaintainer}, 3.90}},
                                           ds, c);
  CHECK(a.positions_for("DV", Craft::Maintainer) == 5);
  CHECK(a.positions_for("CA", Craft::Maintainer) == 12);
  CHECK(a.positions_for("CA", Craft::Inspector) == 1);
  CHECK(a.positions_for("PS", Craft::Inspector) == 2);
  CHECK(a.positions_for("PS", Craft::TestMaintainer) == 4);
  CHECK(a.total() == 24);
  CHECK(a.total(Craft::Maintainer) == 17);
  CHECK(a.cells.at({"CA", Craft::Inspector}).fte == 0.79);
}

TEST_CASE("closed base with zero FTE gets nothing") {
  Dataset ds = two_division_network();
  ds.bases["DV"].closed_into = "CA";
  const AllotmentTable a = allot_positions({{{"DV", Craft::Maintainer}, 0.0}}, ds, lossless_config());
  CHECK(a.total() == 0);
  CHECK_THROWS_AS(allot_positions({{{"DV", Craft::Maintainer}, 0.5}}, ds, lossless_config()), WorkloadError);
}

TEST_CASE("template ladder and shift spread") {
  const Dataset ds = two_division_network();
  const EngineConfig c = lossless_config();
  SUBCASE("five positions use the weekday two-shift template") {
    const auto a = allot_positions({{{"DV", Craft::Maintainer}, 5.0}}, ds, c);
    CHECK(a.positions_on("DV", "1") == 3);
    CHECK(a.positions_on("DV", "2") == 2);
    CHECK(a.positions_on("DV", "3") == 0);
  }
  SUBCASE("ten positions use the continuous template") {
    const auto a = allot_positions({{{"DV", Craft::Maintainer}, 10.0}}, ds, c);
    CHECK(a.positions_on("DV", "1") == 4);
    CHECK(a.positions_on("DV", "2") == 3);
    CHECK(a.positions_on("DV", "3") == 3);
    REQUIRE(a.findings.size() == 1);
    CHECK(a.findings[0].find("surplus 1") != std::string::npos);
  }
  SUBCASE("specialist crafts fill preferred shifts first") {
    const auto a = allot_positions({{{"DV", Craft::Maintainer}, 3.0}, {{"DV", Craft::Inspector}, 1.0}}, ds, c);
    CHECK(a.positions.at({"DV", Craft::Inspector, "1"}) == 1);
    CHECK(a.positions_for("DV", Craft::Maintainer) == 3);
  }
  SUBCASE("base open on day shift only keeps everyone there") {
    Dataset d = ds;
    d.bases["DV"].open_shifts = {{"1", DayClass::Weekday}};
    const auto a = allot_positions({{{"DV", Craft::Maintainer}, 7.0}}, d, c);
    CHECK(a.positions_on("DV", "1") == 7);
  }
}

TEST_CASE("min-2 rule") {
  Dataset ds = tiny_dataset(1);
  EngineConfig c = lossless_config();
  c.pfnw[Craft::Maintainer] = PfnwProfile{};
  const double productive = 261 * 8.0;
  DemandTable d;
  d[{"AA", Craft::Maintainer}].man_hours[Category::FRA] = productive;

  const CoverageResult r = allocate_from_demand(ds, d, c);
  CHECK(r.allotment.cells.at({"AA", Craft::Maintainer}).fte == doctest::Approx(1.0));
  CHECK(r.allotment.positions_for("AA", Craft::Maintainer) == 2);

  c.min_crew_exemptions.insert("AA");
  CHECK(allocate_from_demand(ds, d, c).allotment.positions_for("AA", Craft::Maintainer) == 1);

  SUBCASE("crews of two may mix crafts") {
    EngineConfig m = lossless_config();
    const auto a = allot_positions({{{"AA", Craft::Maintainer}, 1.0}, {{"AA", Craft::Inspector}, 1.0}}, ds, m);
    CHECK(a.total() == 2);
  }
}

TEST_CASE("vacation relief") {
  Dataset ds = tiny_dataset(1);
  EngineConfig c = lossless_config();
  c.pfnw[Craft::Maintainer] = pfnw(32);
  AllotmentTable a;
  a.positions[{"AA", Craft::Maintainer, "1"}] = 10;
  CHECK(vacation_relief(a, ds, c).at({"D", "1"}) == 2);

  a.positions[{"AA", Craft::Maintainer, "1"}] = 0;
  CHECK(vacation_relief(a, ds, c).at({"D", "1"}) == 0);

  a.positions[{"AA", Craft::Maintainer, "1"}] = 10;
  c.pfnw.clear();
  CHECK(vacation_relief(a, ds, c).at({"D", "1"}) == 0);
}

TEST_CASE("heavy gangs") {
  std::map<DivisionId, Division> three = {{"A", {"A", {}}}, {"B", {"B", {}}}, {"C", {"C", {}}}};
  const auto h = heavy_gangs(three, 4);
  int total = 0;
  for (const auto& [d, n] : h) total += n;
  CHECK(total == 12);
  CHECK(heavy_gangs({{"A", {"A", {}}}}, 2).at("A") == 2);
  CHECK(heavy_gangs({}, 4).empty());
}

TEST_CASE("all-zero workload leaves only heavy gangs") {
  Dataset ds = two_division_network();
  EngineConfig c = EngineConfig::defaults();
  DemandTable d;
  d[{"DV", Craft::Maintainer}];
  const CoverageResult r = allocate_from_demand(ds, d, c);
  CHECK(r.allotment.total() == 0);
  CHECK(r.allotment.relief_total() == 0);
  CHECK(r.allotment.heavy_total() == 4);
}

TEST_CASE("craft hosts pool demand and follow closures") {
  Dataset ds = two_division_network();
  DemandTable d;
  d[{"DV", Craft::Inspector}].man_hours[Category::FRA] = 100;
  d[{"PS", Craft::Inspector}].man_hours[Category::FRA] = 50;
  std::vector<HostTransfer> moved;
  const auto out = apply_craft_hosts(d, {{{"DV", Craft::Inspector}, "PS"}}, ds, &moved);
  CHECK(out.at({"PS", Craft::Inspector}).total_man_hours() == 150);
  CHECK(out.count({"DV", Craft::Inspector}) == 0);
  REQUIRE(moved.size() == 1);
  CHECK(moved[0].man_hours == 100);

  ds.bases["PS"].closed_into = "CA";
  d.erase({"PS", Craft::Inspector});
  const auto closed = apply_craft_hosts(d, {{{"DV", Craft::Inspector}, "PS"}}, ds);
  CHECK(closed.at({"CA", Craft::Inspector}).total_man_hours() == 100);
  CHECK_THROWS_AS(apply_craft_hosts(d, {{{"DV", Craft::Inspector}, "ZZ"}}, ds), ReferenceError);
}

TEST_CASE("stage errors carry context") {
  Dataset ds = tiny_dataset(1);
  EngineConfig c = lossless_config();
  c.productive_overrides[{"AA", Craft::Maintainer}] = 5000;  // above available hours
  DemandTable d;
  d[{"AA", Craft::Maintainer}].man_hours[Category::FRA] = 10;
  CHECK_THROWS_WITH_AS(allocate_from_demand(ds, d, c), doctest::Contains("productive_hours"), ConfigError);
}

TEST_CASE("allotment csv totals equal their members") {
  Dataset ds = two_division_network();
  ds.divisions["South"] = Division{"South", std::nullopt};
  ds.bases["MO"] = make_base("MO", "South");
  DemandTable d;
  d[{"DV", Craft::Maintainer}].man_hours[Category::FRA] = 5000;
  d[{"CA", Craft::Maintainer}].man_hours[Category::FRA] = 13000;
  d[{"MO", Craft::Inspector}].man_hours[Category::FRA] = 3000;
  const CoverageResult r = allocate_from_demand(ds, d, lossless_config());
  std::ostringstream out;
  write_allotment_csv(out, r, ds);
  const std::string text = out.str();
  CHECK(text.find("North,subtotal") != std::string::npos);
  CHECK(text.find("system,total") != std::string::npos);
  int by_division = 0;
  for (const auto& [key, n] : r.allotment.positions) by_division += n;
  CHECK(by_division == r.allotment.total());
}
