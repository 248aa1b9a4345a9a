#pragma once

// Workload streams -> man-hours -> FTE -> allotted positions per shift, plus
// vacation relief and heavy repair gangs.

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sigman/base_workload.hpp"
#include "sigman/config.hpp"
#include "sigman/domain.hpp"

namespace sigman {

struct DemandCell {
  std::map<Category, double> gang_hours;  // trouble at full value
  std::map<Category, double> man_hours;   // trouble scaled to its off-peak share

  double total_man_hours() const;
};

using DemandTable = std::map<CellKey, DemandCell>;

// Man-hours per (base, craft); trouble entries count only their off-peak share.
DemandTable aggregate_demand_table(const std::vector<std::vector<GangHours>>& streams, const CrewMatrix& crew);
std::map<CellKey, double> aggregate_demand(const std::vector<std::vector<GangHours>>& streams,
                                           const CrewMatrix& crew);

struct HostTransfer {
  BaseId from;
  BaseId to;
  Craft craft = Craft::Maintainer;
  double man_hours = 0.0;
};

// Moves each hosted (base, craft) cell to its host base. A host that was
// closed resolves to the base it was closed into.
DemandTable apply_craft_hosts(const DemandTable& demand, const std::map<CellKey, BaseId>& hosts, const Dataset& ds,
                              std::vector<HostTransfer>* transfers = nullptr);

// (weekdays - PFNW days) x day_hours x non_rush_pct; ConfigError when <= 0.
double productive_hours(const PfnwProfile& pfnw, const MaintenanceBase& base, double day_hours,
                        int weekdays_per_year = 261);

// Unrounded quotient; ConfigError when productive <= 0.
double compute_fte(double man_hours, double productive);

struct CellRounding {
  double fte = 0.0;
  int rounded = 0;     // rounding policy applied
  int overridden = 0;  // after per-cell override
  int positions = 0;   // after the minimum-crew rule
};

using PositionKey = std::tuple<BaseId, Craft, ShiftId>;

struct AllotmentTable {
  std::map<PositionKey, int> positions;
  std::map<std::pair<DivisionId, ShiftId>, int> relief;
  std::map<DivisionId, int> heavy_gangs;  // positions, all on shift "1"
  std::map<CellKey, double> fte;
  std::map<CellKey, CellRounding> cells;
  std::vector<BaseId> bases;  // every base considered, closed ones included
  std::vector<std::string> findings;

  int positions_for(const BaseId& base, Craft craft) const;
  int positions_on(const BaseId& base, const ShiftId& shift) const;
  int total(Craft craft) const;
  int total() const;  // allotted positions, excluding relief and heavy gangs
  int relief_total() const;
  int heavy_total() const;
};

AllotmentTable allot_positions(const std::map<CellKey, double>& fte, const Dataset& ds, const EngineConfig& config);

// ceil(sum over crafts of positions x PFNW days / weekdays) per (division, shift).
std::map<std::pair<DivisionId, ShiftId>, int> vacation_relief(const AllotmentTable& allot, const Dataset& ds,
                                                               const EngineConfig& config);

std::map<DivisionId, int> heavy_gangs(const std::map<DivisionId, Division>& divisions, int gang_size);

struct CellLedger {
  BaseId base;
  Craft craft = Craft::Maintainer;
  DemandCell demand;            // after hosting
  double available_hours = 0.0;  // per FTE, after PFNW
  double productive_hours = 0.0;
  bool productive_overridden = false;
  CellRounding rounding;
};

// Hours added or lost at every stage, per (base, craft).
struct StageLedger {
  double day_hours = 8.0;
  int weekdays_per_year = 261;
  std::map<Craft, double> pfnw_days;
  std::vector<HostTransfer> hosted;
  std::map<CellKey, CellLedger> cells;
};

struct CoverageResult {
  AllotmentTable allotment;
  StageLedger ledger;
};

// Hosts -> productive hours -> FTE -> allotment -> relief -> heavy gangs.
CoverageResult allocate_from_demand(const Dataset& ds, const DemandTable& demand, const EngineConfig& config);

CoverageResult run_coverage_pipeline(const Dataset& ds, const std::vector<std::vector<GangHours>>& streams,
                                     const EngineConfig& config);

// Allotment shaped by base with division subtotals and a system total.
void write_allotment_csv(std::ostream& out, const CoverageResult& result, const Dataset& ds);
void write_allotment_text(std::ostream& out, const CoverageResult& result, const Dataset& ds);
// Positions by (base, craft, shift), relief and heavy gangs.
void write_positions_csv(std::ostream& out, const AllotmentTable& allot, const Dataset& ds);

}  // namespace sigman
