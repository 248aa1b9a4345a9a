#pragma once

// Repair (trouble-ticket) workload and the shift / curfew statistics derived
// from ticket timestamps.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "sigman/base_workload.hpp"
#include "sigman/domain.hpp"

namespace sigman {

enum class Period { Rush, OffPeak };

std::string_view period_name(Period p);

// Integer accumulators so statistics merge exactly and in any order.
struct ShiftStats {
  std::size_t tickets = 0;
  std::map<ShiftId, std::size_t> touched;        // tickets whose open interval meets the shift
  std::map<ShiftSlot, std::size_t> slot_touched;  // same, split by day class
  std::map<std::pair<ShiftId, Period>, std::int64_t> open_seconds;
  std::int64_t total_open_seconds = 0;

  // Share of tickets worked by each shift; a ticket spanning several shifts
  // counts once for each, so shares can sum past 1.
  std::map<ShiftId, double> shift_share() const;
  // Fraction of all open ticket-hours in (shift, period).
  double open_fraction(const ShiftId& shift, Period period) const;
  // Sum of the off-peak open fractions over every shift.
  double offpeak_commitment() const;
  // Ticket touches normalized over (shift, day class); sums to 1.
  std::map<ShiftSlot, double> slot_attribution() const;

  void merge(const ShiftStats& other);
  bool operator==(const ShiftStats&) const = default;
};

struct TicketStatistics {
  ShiftStats system;
  std::map<LocationId, ShiftStats> by_location;
  std::map<BaseId, ShiftStats> by_base;
};

// Classifies every second of each ticket's [opened, closed) interval by shift
// and by rush/off-peak at the ticket's location. Throws ReferenceError for a
// ticket at a location missing from `locations`.
TicketStatistics derive_shift_stats(const std::vector<TicketRecord>& tickets, const ShiftCalendar& calendar,
                                    const std::map<LocationId, FieldLocation>& locations);

// Stats of one ticket; the building block merged by derive_shift_stats.
ShiftStats ticket_stats(const TicketRecord& ticket, const ShiftCalendar& calendar);

struct TroubleOptions {
  // Extra gang-hours per ticket handled by an adjacent base off-hours.
  double travel_surcharge_hours = 0.0;
};

struct TroubleAuditRow {
  LocationId location;
  BaseId home_base;
  int fault_type = 0;
  int count = 0;
  double hours_per_ticket = 0.0;
  Craft craft = Craft::Maintainer;
  int crew = 0;
  double gang_hours = 0.0;
  double man_hours = 0.0;  // gang-hours x profile crew
  double offpeak_share = 0.0;
};

struct TroubleTransfer {
  LocationId location;
  ShiftSlot slot;
  BaseId from;
  BaseId to;
  double gang_hours = 0.0;
};

struct TroubleWorkload {
  std::vector<GangHours> hours;  // one per (receiving base, craft)
  std::map<BaseId, double> offpeak_commitment;
  std::map<BaseId, double> rush_hours;
  std::vector<TroubleAuditRow> audit;
  std::vector<TroubleTransfer> transfers;

  double total() const;
};

TroubleWorkload compute_trouble_workload(const FaultCountTable& faults,
                                         const std::map<int, RepairProfile>& profiles,
                                         const TicketStatistics& stats, const Dataset& ds,
                                         const TroubleOptions& options = {});

void write_trouble_csv(std::ostream& out, const TroubleWorkload& workload);
void write_shift_stats_csv(std::ostream& out, const TicketStatistics& stats);

}  // namespace sigman
