#pragma once

// Management indicators: time allocation by constraint, utilization by
// workload category and staffing stress against payroll.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sigman/base_workload.hpp"
#include "sigman/config.hpp"
#include "sigman/coverage.hpp"
#include "sigman/domain.hpp"

namespace sigman {

struct TimeAllocationLine {
  std::string scope;
  double paid_hours = 0.0;
  double pfnw_hours = 0.0;
  double curfew_loss_hours = 0.0;
  double shift_rounding_loss_hours = 0.0;
  double location_craft_assignment_loss_hours = 0.0;
  double productive_hours = 0.0;

  double components() const;
  // Share of paid hours in percent; 0 when nothing is paid.
  double pct(double hours) const;
  void add(const TimeAllocationLine& other);
};

struct TimeAllocationReport {
  std::vector<TimeAllocationLine> by_division;
  std::vector<TimeAllocationLine> by_craft;
  TimeAllocationLine system;
};

// Buckets every paid hour of the allotted positions (relief and heavy gangs
// excluded). Throws WorkloadError when a cell cannot be accounted for.
TimeAllocationReport time_allocation_report(const StageLedger& ledger, const Dataset& ds);

struct UtilizationShares {
  std::string scope;
  std::map<Category, double> man_hours;

  double total() const;
  bool empty() const { return !(total() > 0.0); }
  // 0 for an empty scope; callers check empty() to print the marker.
  double share(Category c) const;
};

struct UtilizationReport {
  std::vector<UtilizationShares> by_base;
  std::vector<UtilizationShares> by_division;
  UtilizationShares system;
};

// Full man-hours by category (trouble at rush and off-peak alike).
UtilizationReport utilization_report(const std::vector<std::vector<GangHours>>& streams, const CrewMatrix& crew,
                                     const Dataset& ds);

struct StressLine {
  BaseId base;
  Craft craft = Craft::Maintainer;
  int required = 0;
  int payroll = 0;
  int delta = 0;  // payroll - required
};

struct StressTotals {
  int required = 0;
  int payroll = 0;
  int delta = 0;
};

struct StressReport {
  std::vector<StressLine> lines;
  std::map<Craft, StressTotals> by_craft;
  bool stressed = false;  // some craft's system delta is negative
  std::string narrative;
};

// Throws ReferenceError naming orphan keys: required cells missing from
// payroll, or payroll rows for bases the allotment does not know.
StressReport staffing_stress(const AllotmentTable& allot, const PayrollSnapshot& payroll);

// The allotment itself as a payroll snapshot.
PayrollSnapshot payroll_from_allotment(const AllotmentTable& allot);

void write_time_allocation_csv(std::ostream& out, const TimeAllocationReport& report);
void write_time_allocation_text(std::ostream& out, const TimeAllocationReport& report);
void write_utilization_csv(std::ostream& out, const UtilizationReport& report);
void write_utilization_text(std::ostream& out, const UtilizationReport& report);
void write_stress_csv(std::ostream& out, const StressReport& report);
void write_stress_text(std::ostream& out, const StressReport& report);

// Percent at one decimal place.
std::string percent(double fraction);

}  // namespace sigman
