#pragma once

// FRA test workload: schedule x unit-time matrix -> annual gang-hours.

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "sigman/domain.hpp"

namespace sigman {

struct GangHours {
  double hours = 0.0;
  BaseId base;
  Craft craft = Craft::Maintainer;
  Category category = Category::FRA;
  // Fraction of the hours worked on each shift; sums to 1 when present.
  std::optional<std::map<ShiftId, double>> shift_attribution;
  // Trouble only: fraction of the hours that falls in off-peak periods.
  std::optional<double> offpeak_share;
};

// Exact matrix cell. Throws WorkloadError for a test without a row.
UnitTime unit_time_lookup(const UnitTimeMatrix& matrix, const TestId& test, LocationType type);

struct BaseAuditRow {
  LocationId location;
  TestId test;
  Frequency frequency;
  BaseId base;
  Craft craft = Craft::Maintainer;
  double unit_days = 0.0;             // 0 when the cell is not applicable
  double occurrences = 0.0;           // annualized frequency
  double suppressed_occurrences = 0.0;  // coincident with the parent test
  double annual_hours = 0.0;
  bool suppressed = false;            // every occurrence rides on the parent
};

struct BaseWorkload {
  std::vector<GangHours> hours;     // one per (base, craft), sorted
  std::vector<BaseAuditRow> audit;  // sorted by base, craft, location, test

  double total() const;
  double hours_for(const BaseId& base, Craft craft) const;
};

// Add-on tests contribute nothing for occurrences that coincide with their
// parent at the same location; the rest are charged the full cell time.
BaseWorkload compute_base_workload(const Dataset& ds);

void write_base_audit_csv(std::ostream& out, const BaseWorkload& workload);

}  // namespace sigman
