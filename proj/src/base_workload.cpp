#include "sigman/base_workload.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include "sigman/csv.hpp"

namespace sigman {

UnitTime unit_time_lookup(const UnitTimeMatrix& matrix, const TestId& test, LocationType type) {
  const UnitTimeRow* row = matrix.row_for(test);
  if (!row) throw WorkloadError("unit-time matrix has no row for test '" + test + "'");
  return row->cells[static_cast<std::size_t>(to_int(type) - 1)];
}

double BaseWorkload::total() const {
  double sum = 0.0;
  for (const auto& g : hours) sum += g.hours;
  return sum;
}

double BaseWorkload::hours_for(const BaseId& base, Craft craft) const {
  for (const auto& g : hours) {
    if (g.base == base && g.craft == craft) return g.hours;
  }
  return 0.0;
}

BaseWorkload compute_base_workload(const Dataset& ds) {
  BaseWorkload out;

  std::map<std::pair<LocationId, TestId>, const WorkScheduleEntry*> by_key;
  for (const auto& e : ds.schedule) by_key[{e.location, e.test}] = &e;

  for (const auto& e : ds.schedule) {
    const FieldLocation& loc = ds.location(e.location);
    const TestCatalogEntry& test = ds.test(e.test);

    BaseAuditRow row;
    row.location = e.location;
    row.test = e.test;
    row.frequency = e.frequency;
    row.base = loc.base;
    row.craft = e.craft;
    row.occurrences = annualize(e.frequency);

    if (test.addon_of) {
      auto parent = by_key.find({e.location, *test.addon_of});
      if (parent != by_key.end()) {
        row.suppressed_occurrences = std::min(row.occurrences, annualize(parent->second->frequency));
      }
    }
    const double charged = row.occurrences - row.suppressed_occurrences;
    row.suppressed = charged <= 0.0;

    const UnitTime cell = unit_time_lookup(ds.unit_times, e.test, loc.type);
    if (cell.applicable()) {
      row.unit_days = *cell.gang_days;
    } else if (!row.suppressed) {
      throw WorkloadError("schedule entry (" + e.location + ", " + e.test + ") has no unit time for location type " +
                          std::to_string(to_int(loc.type)));
    }
    row.annual_hours = row.suppressed ? 0.0 : charged * row.unit_days * ds.unit_times.day_hours;
    out.audit.push_back(std::move(row));
  }

  std::sort(out.audit.begin(), out.audit.end(), [](const BaseAuditRow& a, const BaseAuditRow& b) {
    return std::tie(a.base, a.craft, a.location, a.test) < std::tie(b.base, b.craft, b.location, b.test);
  });

  std::map<CellKey, double> sums;
  for (const auto& row : out.audit) sums[{row.base, row.craft}] += row.annual_hours;
  for (const auto& [key, hours] : sums) {
    GangHours g;
    g.hours = hours;
    g.base = key.first;
    g.craft = key.second;
    g.category = Category::FRA;
    out.hours.push_back(std::move(g));
  }
  return out;
}

void write_base_audit_csv(std::ostream& out, const BaseWorkload& workload) {
  csv::write_row(out, {"base", "craft", "location", "test", "frequency", "occurrences_per_year",
                       "unit_days", "suppressed_occurrences", "annual_gang_hours", "suppressed"});
  for (const auto& r : workload.audit) {
    csv::write_row(out, {r.base, std::to_string(to_int(r.craft)), r.location, r.test, r.frequency.str(),
                         csv::fixed(r.occurrences, 4), csv::fixed(r.unit_days, 3),
                         csv::fixed(r.suppressed_occurrences, 4), csv::fixed(r.annual_hours, 3),
                         r.suppressed ? "yes" : "no"});
  }
}

}  // namespace sigman
