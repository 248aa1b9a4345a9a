#include <doctest.h>

#include "helpers.hpp"
#include "sigman/nbntt_workload.hpp"

using namespace sigman;
using namespace sigman::testing;

namespace {

NbnttTaskSpec task(const std::string& name, PerEach unit, double occ, double hours, int crew,
                   std::vector<std::string> scope = {}) {
  NbnttTaskSpec t;
  t.description = name;
  t.per_each = unit;
  t.annual_occurrences = occ;
  t.work_hours = hours;
  t.crew = crew;
  t.scope = std::move(scope);
  return t;
}

// Three divisions, one or two bases each; anchors on the first base.
Dataset network() {
  Dataset ds;
  for (const auto& [div, bases] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"North", {"HM", "PS"}}, {"East", {"WK"}}, {"South", {"MO", "NK"}}}) {
    ds.divisions[div] = Division{div, bases.front()};
    for (const auto& b : bases) ds.bases[b] = make_base(b, div);
  }
  int n = 0;
  for (const auto& [base, count] : std::map<std::string, int>{{"HM", 4}, {"PS", 1}, {"WK", 2}, {"MO", 3}}) {
    for (int i = 0; i < count; ++i) {
      const auto type = i == 0 ? LocationType::LargeInterlocking : LocationType::CodePoint;
      auto l = make_location("L" + std::to_string(++n), base, ds.bases[base].division, type);
      ds.locations[l.id] = l;
    }
  }
  ds.bases["HM"].yards = {"Harmon", "East Yard"};
  return ds;
}

}  // namespace

TEST_CASE("count_units") {
  const Dataset ds = network();
  CHECK(count_units(ds, PerEach::Location).counts.at("HM") == 4);
  CHECK(count_units(ds, PerEach::Location).total() == 10);
  CHECK(count_units(ds, PerEach::Interlocking).counts.at("WK") == 1);

  const UnitCount div = count_units(ds, PerEach::Division);
  CHECK(div.counts == std::map<BaseId, int>{{"HM", 1}, {"WK", 1}, {"MO", 1}});

  CHECK(count_units(ds, PerEach::Yard).counts == std::map<BaseId, int>{{"HM", 2}});
  CHECK(count_units(ds, PerEach::MaintBase).total() == 5);

  const UnitCount bridges = count_units(ds, PerEach::Bridge);
  CHECK(bridges.total() == 0);
  REQUIRE(bridges.warnings.size() == 1);
  CHECK(bridges.warnings[0].find("Bridge") != std::string::npos);

  SUBCASE("scope filters by division or base") {
    CHECK(count_units(ds, PerEach::Location, {"North"}).total() == 5);
    CHECK(count_units(ds, PerEach::Location, {"PS", "WK"}).total() == 3);
    CHECK(count_units(ds, PerEach::Division, {"South"}).counts == std::map<BaseId, int>{{"MO", 1}});
  }
  SUBCASE("division without anchor falls back with a warning") {
    Dataset d = ds;
    d.divisions["East"].anchor_base.reset();
    const UnitCount c = count_units(d, PerEach::Division);
    CHECK(c.counts.at("WK") == 1);
    CHECK(c.warnings.size() == 1);
  }
}

TEST_CASE("compute_nbntt_workload examples") {
  Dataset ds = tiny_dataset(5);
  SUBCASE("paint boxes") {
    const auto w = compute_nbntt_workload({task("Paint Boxes", PerEach::Location, 1, 3, 2)}, ds);
    CHECK(w.total() == doctest::Approx(15.0));
    CHECK(w.man_hours.at({"AA", Craft::Maintainer}) == doctest::Approx(30.0));
  }
  SUBCASE("location inspection at one location") {
    const Dataset one = tiny_dataset(1);
    const auto w = compute_nbntt_workload({task("Location Inspection", PerEach::Location, 4, 1.5, 2)}, one);
    CHECK(w.total() == doctest::Approx(6.0));
    CHECK(w.man_hours.at({"AA", Craft::Maintainer}) == doctest::Approx(12.0));
  }
  SUBCASE("empty task list") {
    const auto w = compute_nbntt_workload({}, ds);
    CHECK(w.total() == 0.0);
    CHECK(w.hours.empty());
  }
  SUBCASE("standby duty is an ordinary task with its own craft") {
    auto t = task("Bridge Standby Duty", PerEach::Division, 12, 8, 1);
    t.craft = Craft::ElectronicTechnician;
    const auto w = compute_nbntt_workload({t}, ds);
    REQUIRE(w.hours.size() == 1);
    CHECK(w.hours[0].craft == Craft::ElectronicTechnician);
    CHECK(w.hours[0].hours == doctest::Approx(96.0));
    CHECK(w.hours[0].category == Category::NbnTT);
  }
}

TEST_CASE("per-location task hours scale with location count") {
  const auto t = task("Paint Boxes", PerEach::Location, 2, 1.25, 2);
  const double one = compute_nbntt_workload({t}, tiny_dataset(3)).total();
  const double two = compute_nbntt_workload({t}, tiny_dataset(6)).total();
  CHECK(two == doctest::Approx(2 * one));
}
