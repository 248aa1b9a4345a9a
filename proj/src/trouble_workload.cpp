#include "sigman/trouble_workload.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>

#include "sigman/csv.hpp"

namespace sigman {

namespace {

constexpr std::int64_t kDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

DayClass day_class_of(std::int64_t day_index, const ShiftCalendar& cal) {
  const std::chrono::sys_days d{std::chrono::days{day_index}};
  const unsigned iso = std::chrono::weekday{d}.iso_encoding();
  return cal.weekend_days.count(static_cast<int>(iso)) ? DayClass::Weekend : DayClass::Weekday;
}

bool in_window(const DayWindow& w, std::int64_t sec_of_day) {
  const std::int64_t s = std::int64_t{w.start_min} * 60;
  const std::int64_t e = std::int64_t{w.end_min} * 60;
  if (s == e) return false;
  return s < e ? (sec_of_day >= s && sec_of_day < e) : (sec_of_day >= s || sec_of_day < e);
}

const ShiftDef& shift_at(const ShiftCalendar& cal, std::int64_t sec_of_day) {
  for (const auto& s : cal.shifts) {
    if (in_window(s.window, sec_of_day)) return s;
  }
  throw Error("shift calendar does not cover " + format_clock(static_cast<int>(sec_of_day / 60)));
}

}  // namespace

std::string_view period_name(Period p) { return p == Period::Rush ? "rush" : "offpeak"; }

std::map<ShiftId, double> ShiftStats::shift_share() const {
  std::map<ShiftId, double> out;
  if (tickets == 0) return out;
  for (const auto& [shift, n] : touched) {
    out[shift] = static_cast<double>(n) / static_cast<double>(tickets);
  }
  return out;
}

double ShiftStats::open_fraction(const ShiftId& shift, Period period) const {
  if (total_open_seconds == 0) return 0.0;
  auto it = open_seconds.find({shift, period});
  if (it == open_seconds.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_open_seconds);
}

double ShiftStats::offpeak_commitment() const {
  if (total_open_seconds == 0) return 0.0;
  std::int64_t offpeak = 0;
  for (const auto& [key, secs] : open_seconds) {
    if (key.second == Period::OffPeak) offpeak += secs;
  }
  return static_cast<double>(offpeak) / static_cast<double>(total_open_seconds);
}

std::map<ShiftSlot, double> ShiftStats::slot_attribution() const {
  std::map<ShiftSlot, double> out;
  std::size_t total = 0;
  for (const auto& [slot, n] : slot_touched) total += n;
  if (total == 0) return out;
  for (const auto& [slot, n] : slot_touched) {
    out[slot] = static_cast<double>(n) / static_cast<double>(total);
  }
  return out;
}

void ShiftStats::merge(const ShiftStats& other) {
  tickets += other.tickets;
  for (const auto& [k, v] : other.touched) touched[k] += v;
  for (const auto& [k, v] : other.slot_touched) slot_touched[k] += v;
  for (const auto& [k, v] : other.open_seconds) open_seconds[k] += v;
  total_open_seconds += other.total_open_seconds;
}

ShiftStats ticket_stats(const TicketRecord& ticket, const ShiftCalendar& cal) {
  if (cal.empty()) throw ConfigError("ticket statistics need a shift calendar");
  if (ticket.closed_at < ticket.opened_at) {
    throw Error("ticket '" + ticket.id + "' closes before it opens");
  }
  const RushWindows& rush = cal.rush_for(ticket.location);
  ShiftStats st;
  st.tickets = 1;
  std::set<ShiftId> shifts;
  std::set<ShiftSlot> slots;

  auto classify = [&](std::int64_t t) {
    const std::int64_t day = floor_div(t, kDay);
    const std::int64_t sec = t - day * kDay;
    const DayClass dc = day_class_of(day, cal);
    const ShiftDef& shift = shift_at(cal, sec);
    bool is_rush = false;
    for (const auto& w : rush.for_day(dc)) is_rush |= in_window(w, sec);
    return std::tuple{day, sec, dc, &shift, is_rush ? Period::Rush : Period::OffPeak};
  };

  if (ticket.closed_at == ticket.opened_at) {
    const auto [day, sec, dc, shift, period] = classify(ticket.opened_at);
    shifts.insert(shift->id);
    slots.insert(ShiftSlot{shift->id, dc});
  }

  std::int64_t t = ticket.opened_at;
  while (t < ticket.closed_at) {
    const auto [day, sec, dc, shift, period] = classify(t);
    // Next instant where the classification may change.
    std::int64_t next = kDay;
    auto consider = [&](int minute) {
      const std::int64_t b = std::int64_t{minute} * 60;
      if (b > sec && b < next) next = b;
    };
    for (const auto& s : cal.shifts) {
      consider(s.window.start_min);
      consider(s.window.end_min);
    }
    for (const auto& w : rush.for_day(dc)) {
      consider(w.start_min);
      consider(w.end_min);
    }
    const std::int64_t seg_end = std::min(ticket.closed_at, day * kDay + next);
    const std::int64_t len = seg_end - t;
    st.open_seconds[{shift->id, period}] += len;
    st.total_open_seconds += len;
    shifts.insert(shift->id);
    slots.insert(ShiftSlot{shift->id, dc});
    t = seg_end;
  }
  for (const auto& s : shifts) st.touched[s] = 1;
  for (const auto& s : slots) st.slot_touched[s] = 1;
  return st;
}

TicketStatistics derive_shift_stats(const std::vector<TicketRecord>& tickets, const ShiftCalendar& calendar,
                                    const std::map<LocationId, FieldLocation>& locations) {
  TicketStatistics out;
  for (const auto& ticket : tickets) {
    auto loc = locations.find(ticket.location);
    if (loc == locations.end()) {
      throw ReferenceError("ticket '" + ticket.id + "' is at unknown location '" + ticket.location + "'");
    }
    const ShiftStats st = ticket_stats(ticket, calendar);
    out.system.merge(st);
    out.by_location[ticket.location].merge(st);
    out.by_base[loc->second.base].merge(st);
  }
  return out;
}

double TroubleWorkload::total() const {
  double sum = 0.0;
  for (const auto& g : hours) sum += g.hours;
  return sum;
}

namespace {

struct Accumulator {
  double hours = 0.0;
  double offpeak = 0.0;
  std::map<ShiftId, double> by_shift;
  double attributed = 0.0;
};

const ShiftStats* stats_for(const LocationId& loc, const TicketStatistics& stats) {
  auto it = stats.by_location.find(loc);
  if (it != stats.by_location.end() && it->second.total_open_seconds > 0) return &it->second;
  if (stats.system.tickets > 0) return &stats.system;
  return nullptr;
}

}  // namespace

TroubleWorkload compute_trouble_workload(const FaultCountTable& faults,
                                         const std::map<int, RepairProfile>& profiles,
                                         const TicketStatistics& stats, const Dataset& ds,
                                         const TroubleOptions& options) {
  TroubleWorkload out;
  std::map<CellKey, Accumulator> acc;

  for (const auto& [key, count] : faults.counts) {
    const auto& [loc_id, fault_type] = key;
    if (count == 0) continue;
    auto prof = profiles.find(fault_type);
    if (prof == profiles.end()) {
      throw WorkloadError("no repair profile for fault type " + std::to_string(fault_type) + " (" +
                          std::string(fault_type_name(fault_type)) + ") at location '" + loc_id + "'");
    }
    const FieldLocation& loc = ds.location(loc_id);
    const MaintenanceBase& home = ds.base(loc.base);
    if (home.closed()) {
      throw WorkloadError("location '" + loc_id + "' maps to closed base '" + home.id + "'");
    }
    const RepairProfile& p = prof->second;
    const Craft craft = p.lead_craft();
    const double gang = count * p.hours_per_ticket;

    const ShiftStats* st = stats_for(loc_id, stats);
    double offpeak_share = 1.0;
    std::map<ShiftSlot, double> slots;
    if (st) {
      slots = st->slot_attribution();
      offpeak_share = st->total_open_seconds > 0 ? st->offpeak_commitment() : 1.0;
    }

    out.audit.push_back(TroubleAuditRow{loc_id, home.id, fault_type, count, p.hours_per_ticket, craft,
                                        p.crew_size(), gang, gang * p.crew_size(), offpeak_share});

    if (slots.empty()) {
      Accumulator& a = acc[{home.id, craft}];
      a.hours += gang;
      a.offpeak += gang * offpeak_share;
      continue;
    }
    for (const auto& [slot, share] : slots) {
      const MaintenanceBase* receiver = nullptr;
      if (home.is_open(slot)) {
        receiver = &home;
      } else {
        for (const auto& adj : home.adjacent_bases) {
          const MaintenanceBase& b = ds.base(adj);
          if (b.is_open(slot)) {
            receiver = &b;
            break;
          }
        }
      }
      if (!receiver) {
        throw WorkloadError("location '" + loc_id + "' has no staffed base for shift " + slot.shift + " (" +
                            std::string(day_class_name(slot.day)) + ")");
      }
      double hours = gang * share;
      if (receiver != &home) {
        hours += count * share * options.travel_surcharge_hours;
        out.transfers.push_back(TroubleTransfer{loc_id, slot, home.id, receiver->id, hours});
      }
      Accumulator& a = acc[{receiver->id, craft}];
      a.hours += hours;
      a.offpeak += hours * offpeak_share;
      a.by_shift[slot.shift] += hours;
      a.attributed += hours;
    }
  }

  std::map<BaseId, std::pair<double, double>> per_base;  // hours, offpeak
  for (const auto& [key, a] : acc) {
    GangHours g;
    g.hours = a.hours;
    g.base = key.first;
    g.craft = key.second;
    g.category = Category::Trouble;
    g.offpeak_share = a.hours > 0 ? a.offpeak / a.hours : 1.0;
    if (a.attributed > 0) {
      std::map<ShiftId, double> attr;
      // Unattributed hours (locations without ticket history) are left out of the split.
      for (const auto& [shift, h] : a.by_shift) attr[shift] = h / a.attributed;
      g.shift_attribution = std::move(attr);
    }
    out.hours.push_back(std::move(g));
    per_base[key.first].first += a.hours;
    per_base[key.first].second += a.offpeak;
  }
  for (const auto& [base, ho] : per_base) {
    out.offpeak_commitment[base] = ho.first > 0 ? ho.second / ho.first : 1.0;
    out.rush_hours[base] = ho.first - ho.second;
  }
  return out;
}

void write_trouble_csv(std::ostream& out, const TroubleWorkload& workload) {
  csv::write_row(out, {"base", "craft", "gang_hours", "offpeak_share", "offpeak_gang_hours",
                       "rush_gang_hours", "shift_attribution"});
  for (const auto& g : workload.hours) {
    std::string attr;
    if (g.shift_attribution) {
      for (const auto& [shift, f] : *g.shift_attribution) {
        if (!attr.empty()) attr += ';';
        attr += shift + "=" + csv::fixed(f, 4);
      }
    }
    const double share = g.offpeak_share.value_or(1.0);
    csv::write_row(out, {g.base, std::to_string(to_int(g.craft)), csv::fixed(g.hours, 3), csv::fixed(share, 4),
                         csv::fixed(g.hours * share, 3), csv::fixed(g.hours * (1 - share), 3), attr});
  }
}

void write_shift_stats_csv(std::ostream& out, const TicketStatistics& stats) {
  csv::write_row(out, {"scope", "shift", "shift_share", "rush_open_fraction", "offpeak_open_fraction"});
  auto emit = [&](const std::string& scope, const ShiftStats& st) {
    const auto share = st.shift_share();
    std::set<ShiftId> shifts;
    for (const auto& [s, v] : share) shifts.insert(s);
    for (const auto& [k, v] : st.open_seconds) shifts.insert(k.first);
    for (const auto& s : shifts) {
      auto it = share.find(s);
      csv::write_row(out, {scope, s, csv::fixed(it == share.end() ? 0.0 : it->second, 4),
                           csv::fixed(st.open_fraction(s, Period::Rush), 4),
                           csv::fixed(st.open_fraction(s, Period::OffPeak), 4)});
    }
  };
  emit("system", stats.system);
  for (const auto& [base, st] : stats.by_base) emit("base:" + base, st);
}

}  // namespace sigman
