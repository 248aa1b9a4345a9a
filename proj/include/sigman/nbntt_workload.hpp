#pragma once

// Non-base, non-trouble-ticket workload from the task inventory.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sigman/base_workload.hpp"
#include "sigman/domain.hpp"

namespace sigman {

struct UnitCount {
  std::map<BaseId, int> counts;  // only bases with a nonzero count
  std::vector<std::string> warnings;

  int total() const;
};

// Units per responsible base. Location / Interlocking / Bridge come from the
// registry, Division / Yard / MaintBase from the base table. `scope` holds
// division or base ids; empty means every base.
UnitCount count_units(const Dataset& ds, PerEach unit, const std::vector<std::string>& scope = {});

struct NbnttAuditRow {
  std::string task;
  BaseId base;
  Craft craft = Craft::Maintainer;
  int units = 0;
  double gang_hours = 0.0;
  double man_hours = 0.0;
};

struct NbnttWorkload {
  std::vector<GangHours> hours;       // one per (base, craft)
  std::map<CellKey, double> man_hours;  // gang-hours x task crew
  std::vector<NbnttAuditRow> audit;
  std::vector<std::string> warnings;

  double total() const;
};

NbnttWorkload compute_nbntt_workload(const std::vector<NbnttTaskSpec>& tasks, const Dataset& ds);

void write_nbntt_csv(std::ostream& out, const NbnttWorkload& workload);

}  // namespace sigman
