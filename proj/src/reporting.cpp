#include "sigman/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sigman/csv.hpp"
#include "sigman/text_table.hpp"

namespace sigman {

std::string percent(double fraction) { return csv::fixed(fraction * 100.0, 1); }

double TimeAllocationLine::components() const {
  return pfnw_hours + curfew_loss_hours + shift_rounding_loss_hours + location_craft_assignment_loss_hours +
         productive_hours;
}

double TimeAllocationLine::pct(double hours) const { return paid_hours > 0.0 ? 100.0 * hours / paid_hours : 0.0; }

void TimeAllocationLine::add(const TimeAllocationLine& o) {
  paid_hours += o.paid_hours;
  pfnw_hours += o.pfnw_hours;
  curfew_loss_hours += o.curfew_loss_hours;
  shift_rounding_loss_hours += o.shift_rounding_loss_hours;
  location_craft_assignment_loss_hours += o.location_craft_assignment_loss_hours;
  productive_hours += o.productive_hours;
}

TimeAllocationReport time_allocation_report(const StageLedger& ledger, const Dataset& ds) {
  std::map<DivisionId, TimeAllocationLine> divisions;
  std::map<Craft, TimeAllocationLine> crafts;
  for (const auto& [id, div] : ds.divisions) divisions[id].scope = id;
  for (Craft c : kAllCrafts) crafts[c].scope = "craft " + std::to_string(to_int(c));

  for (const auto& [key, cell] : ledger.cells) {
    auto base = ds.bases.find(key.first);
    if (base == ds.bases.end()) throw WorkloadError("ledger names unknown base '" + key.first + "'");
    auto days_it = ledger.pfnw_days.find(key.second);
    if (days_it == ledger.pfnw_days.end()) {
      throw WorkloadError("ledger has no PFNW days for craft " + std::to_string(to_int(key.second)));
    }
    const double days = days_it->second;
    const double expected_available = (ledger.weekdays_per_year - days) * ledger.day_hours;
    if (std::abs(cell.available_hours - expected_available) > 1e-9 * std::max(1.0, expected_available)) {
      throw WorkloadError("ledger cell (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                          ") has inconsistent available hours");
    }
    const CellRounding& r = cell.rounding;
    if ((r.positions > 0 || r.fte > 0.0) && !(cell.productive_hours > 0.0)) {
      throw WorkloadError("ledger cell (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                          ") has no productive hours");
    }

    const double h = cell.productive_hours;
    TimeAllocationLine line;
    line.paid_hours = r.positions * ledger.weekdays_per_year * ledger.day_hours;
    line.pfnw_hours = r.positions * days * ledger.day_hours;
    line.curfew_loss_hours = r.positions * (cell.available_hours - h);
    line.productive_hours = r.fte * h;
    line.shift_rounding_loss_hours = ((r.rounded - r.fte) + (r.positions - r.overridden)) * h;
    line.location_craft_assignment_loss_hours = (r.overridden - r.rounded) * h;
    if (std::abs(line.components() - line.paid_hours) > 1e-9 * std::max(1.0, line.paid_hours)) {
      throw WorkloadError("time allocation for (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                          ") does not conserve paid hours");
    }
    divisions[base->second.division].add(line);
    crafts[key.second].add(line);
  }

  TimeAllocationReport out;
  out.system.scope = "system";
  for (auto& [id, line] : divisions) {
    line.scope = id;
    out.system.add(line);
    out.by_division.push_back(line);
  }
  for (auto& [c, line] : crafts) out.by_craft.push_back(line);
  return out;
}

double UtilizationShares::total() const {
  double sum = 0.0;
  for (const auto& [cat, h] : man_hours) sum += h;
  return sum;
}

double UtilizationShares::share(Category c) const {
  const double t = total();
  if (!(t > 0.0)) return 0.0;
  auto it = man_hours.find(c);
  return it == man_hours.end() ? 0.0 : it->second / t;
}

UtilizationReport utilization_report(const std::vector<std::vector<GangHours>>& streams, const CrewMatrix& crew,
                                     const Dataset& ds) {
  // Sorted summation keeps the result independent of input order.
  std::map<std::pair<BaseId, Category>, std::vector<double>> parts;
  for (const auto& stream : streams) {
    for (const auto& g : stream) parts[{g.base, g.category}].push_back(g.hours * crew.at(g.category, g.craft));
  }
  std::map<BaseId, UtilizationShares> bases;
  for (const auto& [id, base] : ds.bases) bases[id].scope = id;
  for (auto& [key, values] : parts) {
    if (!ds.bases.count(key.first)) throw ReferenceError("workload names unknown base '" + key.first + "'");
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    bases[key.first].man_hours[key.second] = sum;
  }

  UtilizationReport out;
  std::map<DivisionId, UtilizationShares> divisions;
  for (const auto& [id, div] : ds.divisions) divisions[id].scope = id;
  out.system.scope = "system";
  for (auto& [id, shares] : bases) {
    UtilizationShares& div = divisions[ds.base(id).division];
    div.scope = ds.base(id).division;
    for (Category c : kAllCategories) {
      const double h = shares.man_hours.count(c) ? shares.man_hours.at(c) : 0.0;
      div.man_hours[c] += h;
      out.system.man_hours[c] += h;
      shares.man_hours[c] += 0.0;
    }
    out.by_base.push_back(shares);
  }
  for (auto& [id, shares] : divisions) out.by_division.push_back(shares);
  return out;
}

PayrollSnapshot payroll_from_allotment(const AllotmentTable& allot) {
  PayrollSnapshot p;
  for (const auto& [key, n] : allot.positions) p.counts[{std::get<0>(key), std::get<1>(key)}] += n;
  return p;
}

StressReport staffing_stress(const AllotmentTable& allot, const PayrollSnapshot& payroll) {
  const PayrollSnapshot required = payroll_from_allotment(allot);
  std::vector<std::string> orphans;
  for (const auto& [key, n] : required.counts) {
    if (n > 0 && !payroll.counts.count(key)) {
      orphans.push_back("required (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                        ") has no payroll row");
    }
  }
  for (const auto& [key, n] : payroll.counts) {
    if (std::find(allot.bases.begin(), allot.bases.end(), key.first) == allot.bases.end()) {
      orphans.push_back("payroll (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                        ") names a base outside the allotment");
    }
  }
  if (!orphans.empty()) {
    std::string msg = "payroll and allotment keys differ:";
    for (const auto& o : orphans) msg += "\n  " + o;
    throw ReferenceError(msg);
  }

  StressReport out;
  std::map<CellKey, StressLine> lines;
  for (const auto& [key, n] : required.counts) {
    lines[key].required = n;
  }
  for (const auto& [key, n] : payroll.counts) lines[key].payroll = n;
  for (auto& [key, line] : lines) {
    line.base = key.first;
    line.craft = key.second;
    line.delta = line.payroll - line.required;
    StressTotals& t = out.by_craft[key.second];
    t.required += line.required;
    t.payroll += line.payroll;
    t.delta += line.delta;
    out.lines.push_back(line);
  }
  std::vector<std::string> short_crafts;
  for (const auto& [craft, t] : out.by_craft) {
    if (t.delta < 0) {
      out.stressed = true;
      short_crafts.push_back(std::to_string(to_int(craft)));
    }
  }
  if (out.stressed) {
    std::string list;
    for (const auto& c : short_crafts) list += (list.empty() ? "" : ", ") + c;
    out.narrative = "Payroll is below the required positions for craft " + list +
                    "; covering the gap implies a baseline of overtime.";
  } else {
    out.narrative = "Payroll meets or exceeds the required positions for every craft.";
  }
  return out;
}

namespace {

const std::vector<std::string> kTimeColumns = {"paid_hours", "pfnw_hours", "curfew_loss_hours",
                                               "shift_rounding_loss_hours",
                                               "location_craft_assignment_loss_hours", "productive_hours"};

std::vector<double> time_values(const TimeAllocationLine& l) {
  return {l.paid_hours,
          l.pfnw_hours,
          l.curfew_loss_hours,
          l.shift_rounding_loss_hours,
          l.location_craft_assignment_loss_hours,
          l.productive_hours};
}

template <typename Fn>
void each_time_line(const TimeAllocationReport& r, Fn&& fn) {
  for (const auto& l : r.by_division) fn("division", l);
  for (const auto& l : r.by_craft) fn("craft", l);
  fn("system", r.system);
}

template <typename Fn>
void each_utilization(const UtilizationReport& r, Fn&& fn) {
  for (const auto& s : r.by_base) fn("base", s);
  for (const auto& s : r.by_division) fn("division", s);
  fn("system", r.system);
}

}  // namespace

void write_time_allocation_csv(std::ostream& out, const TimeAllocationReport& report) {
  std::vector<std::string> header = {"level", "scope"};
  for (const auto& c : kTimeColumns) header.push_back(c);
  for (std::size_t i = 1; i < kTimeColumns.size(); ++i) {
    header.push_back(kTimeColumns[i].substr(0, kTimeColumns[i].size() - 6) + "_pct");
  }
  csv::write_row(out, header);
  each_time_line(report, [&](const char* level, const TimeAllocationLine& l) {
    std::vector<std::string> row = {level, l.scope};
    const auto values = time_values(l);
    for (double v : values) row.push_back(csv::fixed(v, 3));
    for (std::size_t i = 1; i < values.size(); ++i) row.push_back(csv::fixed(l.pct(values[i]), 1));
    csv::write_row(out, row);
  });
}

void write_time_allocation_text(std::ostream& out, const TimeAllocationReport& report) {
  text::Table t({"Scope", "Paid", "PFNW", "Curfew", "ShiftRound", "LocCraft", "Productive"});
  std::string last;
  each_time_line(report, [&](const char* level, const TimeAllocationLine& l) {
    if (!last.empty() && last != level) t.rule();
    last = level;
    std::vector<std::string> row = {l.scope, csv::fixed(l.paid_hours, 0)};
    const auto values = time_values(l);
    for (std::size_t i = 1; i < values.size(); ++i) {
      row.push_back(csv::fixed(values[i], 0) + " (" + csv::fixed(l.pct(values[i]), 1) + "%)");
    }
    t.add(row);
  });
  t.render(out);
}

void write_utilization_csv(std::ostream& out, const UtilizationReport& report) {
  csv::write_row(out, {"level", "scope", "fra_man_hours", "nbntt_man_hours", "trouble_man_hours", "fra_pct",
                       "nbntt_pct", "trouble_pct"});
  each_utilization(report, [&](const char* level, const UtilizationShares& s) {
    std::vector<std::string> row = {level, s.scope};
    for (Category c : {Category::FRA, Category::NbnTT, Category::Trouble}) {
      row.push_back(csv::fixed(s.man_hours.count(c) ? s.man_hours.at(c) : 0.0, 3));
    }
    for (Category c : {Category::FRA, Category::NbnTT, Category::Trouble}) {
      row.push_back(s.empty() ? "" : percent(s.share(c)));
    }
    csv::write_row(out, row);
  });
}

void write_utilization_text(std::ostream& out, const UtilizationReport& report) {
  text::Table t({"Scope", "FRA", "NbnTT", "Trouble", "Man-hours"});
  std::string last;
  each_utilization(report, [&](const char* level, const UtilizationShares& s) {
    if (!last.empty() && last != level) t.rule();
    last = level;
    if (s.empty()) {
      t.add({s.scope, "-", "-", "-", "0"});
      return;
    }
    t.add({s.scope, percent(s.share(Category::FRA)) + "%", percent(s.share(Category::NbnTT)) + "%",
           percent(s.share(Category::Trouble)) + "%", csv::fixed(s.total(), 0)});
  });
  t.render(out);
}

void write_stress_csv(std::ostream& out, const StressReport& report) {
  csv::write_row(out, {"base", "craft", "required", "payroll", "delta"});
  for (const auto& l : report.lines) {
    csv::write_row(out, {l.base, std::to_string(to_int(l.craft)), std::to_string(l.required),
                         std::to_string(l.payroll), std::to_string(l.delta)});
  }
  for (const auto& [craft, t] : report.by_craft) {
    csv::write_row(out, {"system", std::to_string(to_int(craft)), std::to_string(t.required),
                         std::to_string(t.payroll), std::to_string(t.delta)});
  }
}

void write_stress_text(std::ostream& out, const StressReport& report) {
  text::Table t({"Craft", "Required", "Payroll", "Delta"});
  for (const auto& [craft, s] : report.by_craft) {
    t.add({std::string(craft_name(craft)), std::to_string(s.required), std::to_string(s.payroll),
           std::to_string(s.delta)});
  }
  t.render(out);
  out << (report.stressed ? "STRESSED: " : "not stressed: ") << report.narrative << '\n';
}

}  // namespace sigman
