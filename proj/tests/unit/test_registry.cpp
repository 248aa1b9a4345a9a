#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "sigman/csv.hpp"
#include "sigman/registry.hpp"

using namespace sigman;
using namespace sigman::testing;
namespace fs = std::filesystem;

namespace {

// Copy of the sample dataset in a temp dir, so single files can be replaced.
struct SampleCopy {
  TempDir dir;
  SampleCopy() {
    for (const auto& e : fs::directory_iterator(sample_manifest().parent_path())) {
      fs::copy_file(e.path(), dir.path() / e.path().filename());
    }
  }
  fs::path manifest() const { return dir.path() / "manifest.json"; }
  void replace(const std::string& name, const std::string& content) const { dir.write(name, content); }
  std::string read(const std::string& name) const { return csv::read_file((dir.path() / name).string()); }
};

}  // namespace

TEST_CASE("sample dataset loads with 15 locations and 3 divisions") {
  const Dataset ds = load_dataset(sample_manifest());
  CHECK(ds.locations.size() == 15);
  CHECK(ds.divisions.size() == 3);
  CHECK_FALSE(ds.schedule.empty());
  CHECK(ds.payroll.has_value());
}

TEST_CASE("empty schedule loads with a warning") {
  SampleCopy s;
  s.replace("schedule.csv", "location_id,test_id,frequency,performer,craft\n");
  const Dataset ds = load_dataset(s.manifest());
  CHECK(ds.schedule.empty());
  CHECK_FALSE(ds.warnings.empty());
}

TEST_CASE("schedule row for an unknown location is a reference error") {
  SampleCopy s;
  s.replace("schedule.csv", s.read("schedule.csv") + "NOWHERE,77,1 Yr,Gang #1,1\n");
  CHECK_THROWS_AS(load_dataset(s.manifest()), ReferenceError);

  LoadOptions lenient;
  lenient.allow_orphan_schedule_rows = true;
  const Dataset ds = load_dataset(s.manifest(), lenient);
  REQUIRE(ds.orphan_schedule.size() == 1);
  const ValidationReport r = validate_dataset(ds);
  CHECK(r.count(FindingKind::DecommissionedSuspect) == 1);
}

TEST_CASE("csv input rejection") {
  SampleCopy s;
  SUBCASE("unknown column") {
    s.replace("tasks.csv", "description,per_each,annual_occurrences,work_hours,crew,colour\nX,Location,1,1,2,red\n");
    CHECK_THROWS_AS(load_dataset(s.manifest()), ParseError);
  }
  SUBCASE("missing column") {
    s.replace("tasks.csv", "description,per_each,annual_occurrences,work_hours\nX,Location,1,1\n");
    CHECK_THROWS_AS(load_dataset(s.manifest()), ParseError);
  }
  SUBCASE("non-numeric cell reports its line") {
    s.replace("tasks.csv", "description,per_each,annual_occurrences,work_hours,crew\nX,Location,1,1,2\nY,Location,x,1,2\n");
    try {
      load_dataset(s.manifest());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate schedule key") {
    const std::string sched = s.read("schedule.csv");
    const std::size_t start = sched.find('\n') + 1;
    const std::string first_row = sched.substr(start, sched.find('\n', start) + 1 - start);
    s.replace("schedule.csv", sched + first_row);
    CHECK_THROWS_AS(load_dataset(s.manifest()), DuplicateKeyError);
  }
  SUBCASE("fault total that disagrees with the row") {
    s.replace("faults.csv", "location_id,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,total\nCP-A,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,5\n");
    CHECK_THROWS_AS(load_dataset(s.manifest()), ParseError);
  }
  SUBCASE("ticket closing before it opens") {
    s.replace("tickets.csv", "ticket_id,location_id,fault_type,opened_at,closed_at\nK1,CP-A,1,2016-01-02T10:00,2016-01-02T09:00\n");
    CHECK_THROWS(load_dataset(s.manifest()));
  }
}

TEST_CASE("json input rejection") {
  SampleCopy s;
  SUBCASE("unknown manifest key") {
    s.replace("manifest.json", R"({"catalog":"catalog.json","unit_times":"unit_times.json","network":"network.json",
      "schedule":"schedule.csv","faults":"faults.csv","tasks":"tasks.csv","extra":"x"})");
    CHECK_THROWS(load_dataset(s.manifest()));
  }
  SUBCASE("malformed catalog") {
    s.replace("catalog.json", "{\"tests\": [");
    CHECK_THROWS_AS(load_dataset(s.manifest()), ParseError);
  }
  SUBCASE("self-referential add-on") {
    s.replace("catalog.json", R"({"tests":[{"id":"77","name":"Surge","frequency":"1 Yr","craft":1,"addon_of":"77"}]})");
    CHECK_THROWS(load_dataset(s.manifest()));
  }
  SUBCASE("missing member file") {
    fs::remove(s.dir.path() / "tasks.csv");
    CHECK_THROWS(load_dataset(s.manifest()));
  }
}

TEST_CASE("classify_location") {
  CHECK(classify_location({{"grade_crossing", 1}}) == LocationType::GradeCrossing);
  CHECK(classify_location({{"switch_machine", 6}, {"signal", 4}}) == LocationType::LargeInterlocking);
  CHECK(classify_location({{"switch_machine", 3}}) == LocationType::SmallInterlocking);
  CHECK(classify_location({{"switch_machine", 5}}) == LocationType::SmallInterlocking);
  CHECK(classify_location({{"code_point", 1}}) == LocationType::CodePoint);
  CHECK(classify_location({{"hand_operated_switch", 2}}) == LocationType::HandOperatedSwitch);
  // Interlocking work dominates a mixed site.
  CHECK(classify_location({{"grade_crossing", 1}, {"switch_machine", 2}}) == LocationType::SmallInterlocking);
  CHECK(classify_location({{"movable_bridge", 1}}) == LocationType::SmallInterlocking);
  CHECK(classify_location({{"grade_crossing", 1}, {"hand_operated_switch", 1}}) == LocationType::GradeCrossing);

  CHECK_THROWS_WITH_AS(classify_location({}), doctest::Contains("cannot classify"), Error);
  CHECK_THROWS_WITH_AS(classify_location({{"teleporter", 1}}), doctest::Contains("teleporter"), Error);
}

TEST_CASE("annualize") {
  CHECK(annualize(Frequency::parse("1 Mo")) == 12.0);
  CHECK(annualize(Frequency::parse("3 Mo")) == 4.0);
  CHECK(annualize(Frequency::parse("10 Yr")) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(Frequency::parse("  6 mo ") == Frequency{6, Frequency::Unit::Month});
  CHECK(Frequency::parse("2YR") == Frequency{2, Frequency::Unit::Year});
  CHECK(Frequency::parse("4 Yr").str() == "4 Yr");
  CHECK_THROWS(Frequency::parse("0 Mo"));
  CHECK_THROWS(Frequency::parse("Mo"));
  CHECK_THROWS(Frequency::parse("3 Wk"));
  for (int n = 1; n <= 120; ++n) {
    CHECK(annualize({n, Frequency::Unit::Month}) == doctest::Approx(annualize({1, Frequency::Unit::Month}) / n));
    CHECK(annualize({n, Frequency::Unit::Year}) == doctest::Approx(1.0 / n));
  }
}

TEST_CASE("validate_dataset findings") {
  const Dataset sample = load_dataset(sample_manifest());

  SUBCASE("location without schedule rows is a warning") {
    Dataset ds = sample;
    const LocationId id = ds.locations.begin()->first;
    std::erase_if(ds.schedule, [&](const WorkScheduleEntry& e) { return e.location == id; });
    const ValidationReport r = validate_dataset(ds);
    REQUIRE(r.count(FindingKind::LocationWithoutSchedule) == 1);
    for (const auto& f : r.findings) {
      if (f.kind == FindingKind::LocationWithoutSchedule) CHECK(f.severity == Severity::Warning);
    }
  }

  SUBCASE("track circuits at a code point are not applicable") {
    const Dataset ds = load_dataset(fixtures() / "invalid" / "manifest.json");
    const ValidationReport r = validate_dataset(ds);
    CHECK(r.count(FindingKind::TestNotApplicable) == 1);
    CHECK(r.has_errors());
  }

  SUBCASE("complete coverage gives an empty report") {
    const Dataset ds = load_dataset(fixtures() / "headline" / "manifest.json");
    CHECK(validate_dataset(ds).empty());
  }

  SUBCASE("required tests check runs only when configured") {
    Dataset ds = sample;
    ds.required_tests.reset();
    CHECK(validate_dataset(ds).count(FindingKind::MissingRequiredTest) == 0);
    CHECK(validate_dataset(sample).count(FindingKind::MissingRequiredTest) > 0);
  }
}

TEST_CASE("deleting one schedule row adds exactly one finding") {
  const Dataset ds = load_dataset(sample_manifest());
  const std::size_t before = validate_dataset(ds).findings.size();
  for (std::size_t i = 0; i < ds.schedule.size(); ++i) {
    Dataset cut = ds;
    cut.schedule.erase(cut.schedule.begin() + static_cast<std::ptrdiff_t>(i));
    const ValidationReport r = validate_dataset(cut);
    const auto& e = ds.schedule[i];
    const bool only_row = std::count_if(ds.schedule.begin(), ds.schedule.end(),
                                        [&](const WorkScheduleEntry& x) { return x.location == e.location; }) == 1;
    const bool required = [&] {
      if (!ds.required_tests) return false;
      for (const auto& [kind, tests] : *ds.required_tests) {
        if (ds.location(e.location).count_of(kind) > 0 &&
            std::find(tests.begin(), tests.end(), e.test) != tests.end()) {
          return true;
        }
      }
      return false;
    }();
    // Only rows whose loss is observable add a finding.
    if (only_row || required) {
      CHECK_MESSAGE(r.findings.size() == before + 1, "row " << e.location << "/" << e.test);
    } else {
      CHECK(r.findings.size() == before);
    }
  }
}

TEST_CASE("load -> write -> load round-trips") {
  const Dataset ds = load_dataset(sample_manifest());
  TempDir dir;
  write_dataset(ds, dir.path());
  const Dataset again = load_dataset(dir.path() / "manifest.json");
  CHECK(again == ds);
}
