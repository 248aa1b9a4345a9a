#include "sigman/scenario.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "sigman/csv.hpp"
#include "sigman/text_table.hpp"

namespace sigman {

Dataset close_base(const Dataset& ds, const BaseId& base_id) {
  auto it = ds.bases.find(base_id);
  if (it == ds.bases.end()) throw ReferenceError("cannot close unknown base '" + base_id + "'");
  const MaintenanceBase& closing = it->second;
  if (closing.closed()) {
    throw ConfigError("base '" + base_id + "' is already closed into '" + *closing.closed_into + "'");
  }
  if (closing.adjacent_bases.empty()) throw ConfigError("base '" + base_id + "' has no adjacent bases");

  const MaintenanceBase* receiver = nullptr;
  for (const auto& adj : closing.adjacent_bases) {
    const MaintenanceBase& b = ds.base(adj);
    if (!b.closed()) {
      receiver = &b;
      break;
    }
  }
  if (!receiver) throw ConfigError("every base adjacent to '" + base_id + "' is closed");
  const BaseId to = receiver->id;

  Dataset out = ds;
  for (auto& [id, loc] : out.locations) {
    if (loc.base != base_id) continue;
    if (!loc.origin_base) loc.origin_base = loc.base;
    loc.base = to;
  }
  // Yards, the tower unit and anchor duties stay listed on the closed base and
  // are counted at the base it closed into.
  out.bases.at(base_id).closed_into = to;
  // Staff on the closed base's payroll report to the receiver.
  if (out.payroll) {
    std::map<CellKey, int> counts;
    for (const auto& [key, n] : out.payroll->counts) counts[{key.first == base_id ? to : key.first, key.second}] += n;
    out.payroll->counts = std::move(counts);
  }
  return out;
}

ScenarioResult scenario_close_location(const Dataset& ds, const BaseId& base, const EngineConfig& config) {
  ScenarioResult r;
  r.closed = base;
  r.before = run_pipeline(ds, config);
  const Dataset closed = close_base(r.before.dataset, base);
  r.receiver = *closed.base(base).closed_into;
  r.after = run_pipeline(closed, config);
  return r;
}

namespace {

struct DeltaWriter {
  std::ostream& out;

  void number(const std::string& table, const std::string& scope, const std::string& craft, double before,
              double after, int decimals) {
    csv::write_row(out, {table, scope, craft, csv::fixed(before, decimals), csv::fixed(after, decimals),
                         csv::fixed(after - before, decimals)});
  }
  void count(const std::string& table, const std::string& scope, const std::string& craft, int before, int after) {
    csv::write_row(out, {table, scope, craft, std::to_string(before), std::to_string(after),
                         std::to_string(after - before)});
  }
};

std::map<BaseId, double> demand_by_base(const PipelineRun& run) {
  std::map<BaseId, double> out;
  for (const auto& id : run.coverage.allotment.bases) out[id] = 0.0;
  for (const auto& [key, cell] : run.coverage.ledger.cells) out[key.first] += cell.demand.total_man_hours();
  return out;
}

template <typename Map>
std::set<typename Map::key_type> key_union(const Map& a, const Map& b) {
  std::set<typename Map::key_type> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  return keys;
}

template <typename Map>
typename Map::mapped_type value_or_zero(const Map& m, const typename Map::key_type& k) {
  auto it = m.find(k);
  return it == m.end() ? typename Map::mapped_type{} : it->second;
}

}  // namespace

void write_scenario_delta_csv(std::ostream& out, const ScenarioResult& r) {
  csv::write_row(out, {"table", "scope", "craft", "before", "after", "delta"});
  DeltaWriter w{out};

  const auto db = demand_by_base(r.before);
  const auto da = demand_by_base(r.after);
  for (const auto& base : key_union(db, da)) {
    w.number("demand_man_hours", base, "", value_or_zero(db, base), value_or_zero(da, base), 3);
  }
  w.number("demand_man_hours", "system", "", r.before.demand_man_hours(), r.after.demand_man_hours(), 3);

  const auto& fb = r.before.coverage.allotment.fte;
  const auto& fa = r.after.coverage.allotment.fte;
  for (const auto& key : key_union(fb, fa)) {
    w.number("fte", key.first, std::to_string(to_int(key.second)), value_or_zero(fb, key), value_or_zero(fa, key), 4);
  }

  const auto pb = payroll_from_allotment(r.before.coverage.allotment).counts;
  const auto pa = payroll_from_allotment(r.after.coverage.allotment).counts;
  for (const auto& key : key_union(pb, pa)) {
    w.count("positions", key.first, std::to_string(to_int(key.second)), value_or_zero(pb, key),
            value_or_zero(pa, key));
  }
  for (Craft c : kAllCrafts) {
    w.count("positions", "system", std::to_string(to_int(c)), r.before.coverage.allotment.total(c),
            r.after.coverage.allotment.total(c));
  }
  w.count("positions", "system", "all", r.before.coverage.allotment.total(), r.after.coverage.allotment.total());

  const auto& rb = r.before.coverage.allotment.relief;
  const auto& ra = r.after.coverage.allotment.relief;
  for (const auto& key : key_union(rb, ra)) {
    w.count("relief", key.first + "/shift " + key.second, "", value_or_zero(rb, key), value_or_zero(ra, key));
  }
  w.count("heavy_gangs", "system", "", r.before.coverage.allotment.heavy_total(),
          r.after.coverage.allotment.heavy_total());

  const TimeAllocationLine& tb = r.before.time_allocation.system;
  const TimeAllocationLine& ta = r.after.time_allocation.system;
  w.number("time_allocation", "paid_hours", "", tb.paid_hours, ta.paid_hours, 3);
  w.number("time_allocation", "pfnw_hours", "", tb.pfnw_hours, ta.pfnw_hours, 3);
  w.number("time_allocation", "curfew_loss_hours", "", tb.curfew_loss_hours, ta.curfew_loss_hours, 3);
  w.number("time_allocation", "shift_rounding_loss_hours", "", tb.shift_rounding_loss_hours,
           ta.shift_rounding_loss_hours, 3);
  w.number("time_allocation", "location_craft_assignment_loss_hours", "", tb.location_craft_assignment_loss_hours,
           ta.location_craft_assignment_loss_hours, 3);
  w.number("time_allocation", "productive_hours", "", tb.productive_hours, ta.productive_hours, 3);

  for (Category c : {Category::FRA, Category::NbnTT, Category::Trouble}) {
    w.number("utilization_pct", "system", std::string(category_name(c)),
             100.0 * r.before.utilization.system.share(c), 100.0 * r.after.utilization.system.share(c), 1);
  }
}

void write_scenario_text(std::ostream& out, const ScenarioResult& r) {
  const AllotmentTable& before = r.before.coverage.allotment;
  const AllotmentTable& after = r.after.coverage.allotment;
  out << "Closing base " << r.closed << "; its locations, yards and tower duties move to " << r.receiver << ".\n";
  text::Table t({"Measure", "Before", "After", "Delta"});
  auto row = [&](const std::string& name, double b, double a, int decimals) {
    t.add({name, csv::fixed(b, decimals), csv::fixed(a, decimals), csv::fixed(a - b, decimals)});
  };
  row("demand man-hours", r.before.demand_man_hours(), r.after.demand_man_hours(), 0);
  for (Craft c : kAllCrafts) {
    row("positions craft " + std::to_string(to_int(c)), before.total(c), after.total(c), 0);
  }
  row("positions total", before.total(), after.total(), 0);
  row("relief positions", before.relief_total(), after.relief_total(), 0);
  row("productive hours", r.before.time_allocation.system.productive_hours,
      r.after.time_allocation.system.productive_hours, 0);
  t.render(out);
  out << "Caveat: locations served from " << r.receiver
      << " are farther from their crews; failure response times will rise and are not part of this estimate.\n";
}

}  // namespace sigman
