#include "sigman/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "sigman/csv.hpp"
#include "sigman/text_table.hpp"

namespace sigman {

namespace {

// Specialist crafts take the preferred shifts first.
constexpr std::array<Craft, 4> kShiftFillOrder = {Craft::Inspector, Craft::ElectronicTechnician,
                                                  Craft::TestMaintainer, Craft::Maintainer};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  const std::string prefix = std::string("coverage stage '") + name + "': ";
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const ReferenceError& e) {
    throw ReferenceError(prefix + e.what());
  } catch (const WorkloadError& e) {
    throw WorkloadError(prefix + e.what());
  }
}

const MaintenanceBase& known_base(const Dataset& ds, const BaseId& id, const char* what) {
  auto it = ds.bases.find(id);
  if (it == ds.bases.end()) throw ReferenceError(std::string(what) + " names unknown base '" + id + "'");
  return it->second;
}

double available_hours(double pfnw_days, double day_hours, int weekdays) {
  return (weekdays - pfnw_days) * day_hours;
}

std::vector<ShiftId> preference_order(std::vector<ShiftId> shifts, const std::vector<ShiftId>& preference) {
  auto rank = [&](const ShiftId& s) {
    auto it = std::find(preference.begin(), preference.end(), s);
    return static_cast<std::size_t>(it - preference.begin());
  };
  std::sort(shifts.begin(), shifts.end(), [&](const ShiftId& a, const ShiftId& b) {
    const auto ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  return shifts;
}

bool template_fits(const CoverageTemplate& t, const MaintenanceBase& base) {
  return std::all_of(t.shifts_covered.begin(), t.shifts_covered.end(),
                     [&](const ShiftSlot& s) { return base.open_shifts.count(s) > 0; });
}

// Headcount per covered shift, in preference order.
std::vector<std::pair<ShiftId, int>> shift_quotas(const MaintenanceBase& base, int headcount,
                                                  const EngineConfig& config, std::vector<std::string>& findings) {
  const CoverageTemplate* chosen = nullptr;
  const CoverageTemplate* largest = nullptr;
  const CoverageTemplate* smallest = nullptr;
  for (const auto& t : config.templates) {
    if (!template_fits(t, base)) continue;
    if (!largest || t.positions_required > largest->positions_required) largest = &t;
    if (!smallest || t.positions_required < smallest->positions_required) smallest = &t;
    if (t.positions_required <= headcount && (!chosen || t.positions_required > chosen->positions_required)) {
      chosen = &t;
    }
  }

  std::vector<ShiftId> covered;
  if (chosen || smallest) {
    covered = (chosen ? chosen : smallest)->shift_ids();
  } else {
    for (const auto& s : base.open_shifts) {
      if (std::find(covered.begin(), covered.end(), s.shift) == covered.end()) covered.push_back(s.shift);
    }
    findings.push_back("base " + base.id + ": no coverage template fits its open shifts; positions spread over them");
  }
  covered = preference_order(covered, config.shift_preference);

  std::vector<std::pair<ShiftId, int>> quotas;
  for (const auto& s : covered) quotas.emplace_back(s, 0);
  const int n = static_cast<int>(quotas.size());
  int remaining = headcount;
  if (chosen) {
    const int each = chosen->positions_required / n;
    const int extra = chosen->positions_required % n;
    for (int i = 0; i < n; ++i) quotas[i].second = each + (i < extra ? 1 : 0);
    remaining -= chosen->positions_required;
  }
  for (int i = 0; remaining > 0; i = (i + 1) % n, --remaining) ++quotas[i].second;

  if (largest && headcount > largest->positions_required) {
    findings.push_back("base " + base.id + ": " + std::to_string(headcount) + " positions exceed template '" +
                       largest->name + "' (" + std::to_string(largest->positions_required) + "); surplus " +
                       std::to_string(headcount - largest->positions_required) +
                       " is a candidate for transfer to an adjacent base");
  }
  return quotas;
}

double display_productive(const CoverageResult& r, const MaintenanceBase& base, Craft craft) {
  auto it = r.ledger.cells.find({base.id, craft});
  if (it != r.ledger.cells.end()) return it->second.productive_hours;
  auto days = r.ledger.pfnw_days.find(craft);
  const double d = days == r.ledger.pfnw_days.end() ? 0.0 : days->second;
  return available_hours(d, r.ledger.day_hours, r.ledger.weekdays_per_year) * base.non_rush_pct;
}

}  // namespace

double DemandCell::total_man_hours() const {
  double sum = 0.0;
  for (const auto& [cat, h] : man_hours) sum += h;
  return sum;
}

DemandTable aggregate_demand_table(const std::vector<std::vector<GangHours>>& streams, const CrewMatrix& crew) {
  DemandTable out;
  for (const auto& stream : streams) {
    for (const auto& g : stream) {
      const int size = crew.at(g.category, g.craft);
      double share = 1.0;
      if (g.category == Category::Trouble && g.offpeak_share) share = *g.offpeak_share;
      DemandCell& cell = out[{g.base, g.craft}];
      cell.gang_hours[g.category] += g.hours;
      cell.man_hours[g.category] += g.hours * share * size;
    }
  }
  return out;
}

std::map<CellKey, double> aggregate_demand(const std::vector<std::vector<GangHours>>& streams,
                                           const CrewMatrix& crew) {
  std::map<CellKey, double> out;
  for (const auto& [key, cell] : aggregate_demand_table(streams, crew)) out[key] = cell.total_man_hours();
  return out;
}

DemandTable apply_craft_hosts(const DemandTable& demand, const std::map<CellKey, BaseId>& hosts, const Dataset& ds,
                              std::vector<HostTransfer>* transfers) {
  DemandTable out;
  for (const auto& [key, cell] : demand) {
    known_base(ds, key.first, "demand");
    BaseId target = key.first;
    auto host = hosts.find(key);
    if (host != hosts.end()) {
      target = host->second;
      for (std::size_t hops = 0; known_base(ds, target, "craft host").closed(); ++hops) {
        if (hops > ds.bases.size()) throw ReferenceError("closure chain from base '" + host->second + "' loops");
        target = *ds.base(target).closed_into;
      }
    }
    DemandCell& dst = out[{target, key.second}];
    for (const auto& [cat, h] : cell.gang_hours) dst.gang_hours[cat] += h;
    for (const auto& [cat, h] : cell.man_hours) dst.man_hours[cat] += h;
    if (target != key.first && transfers) {
      transfers->push_back(HostTransfer{key.first, target, key.second, cell.total_man_hours()});
    }
  }
  return out;
}

double productive_hours(const PfnwProfile& pfnw, const MaintenanceBase& base, double day_hours,
                        int weekdays_per_year) {
  const double h = available_hours(pfnw.days(), day_hours, weekdays_per_year) * base.non_rush_pct;
  if (!(h > 0.0)) {
    throw ConfigError("base " + base.id + " has no productive hours (" + csv::exact(h) + ")");
  }
  return h;
}

double compute_fte(double man_hours, double productive) {
  if (!(productive > 0.0)) throw ConfigError("productive hours must be > 0, got " + csv::exact(productive));
  return man_hours / productive;
}

int AllotmentTable::positions_for(const BaseId& base, Craft craft) const {
  int sum = 0;
  for (const auto& [key, n] : positions) {
    if (std::get<0>(key) == base && std::get<1>(key) == craft) sum += n;
  }
  return sum;
}

int AllotmentTable::positions_on(const BaseId& base, const ShiftId& shift) const {
  int sum = 0;
  for (const auto& [key, n] : positions) {
    if (std::get<0>(key) == base && std::get<2>(key) == shift) sum += n;
  }
  return sum;
}

int AllotmentTable::total(Craft craft) const {
  int sum = 0;
  for (const auto& [key, n] : positions) {
    if (std::get<1>(key) == craft) sum += n;
  }
  return sum;
}

int AllotmentTable::total() const {
  int sum = 0;
  for (const auto& [key, n] : positions) sum += n;
  return sum;
}

int AllotmentTable::relief_total() const {
  int sum = 0;
  for (const auto& [key, n] : relief) sum += n;
  return sum;
}

int AllotmentTable::heavy_total() const {
  int sum = 0;
  for (const auto& [key, n] : heavy_gangs) sum += n;
  return sum;
}

AllotmentTable allot_positions(const std::map<CellKey, double>& fte, const Dataset& ds, const EngineConfig& config) {
  AllotmentTable out;
  out.fte = fte;
  for (const auto& [id, base] : ds.bases) out.bases.push_back(id);

  for (const auto& [key, f] : fte) {
    const MaintenanceBase& base = known_base(ds, key.first, "FTE table");
    if (!std::isfinite(f) || f < 0.0) {
      throw WorkloadError("FTE for (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                          ") is not a non-negative number");
    }
    if (base.closed()) {
      if (f > 0.0) throw WorkloadError("closed base " + key.first + " still carries demand");
      continue;
    }
    CellRounding& cell = out.cells[key];
    cell.fte = f;
    cell.rounded = config.rounding.apply(f);
    cell.overridden = cell.rounded;
  }
  for (const auto& [key, n] : config.position_overrides) {
    const MaintenanceBase& base = known_base(ds, key.first, "position override");
    if (base.closed()) continue;
    CellRounding& cell = out.cells[key];
    cell.overridden = n;
  }
  for (auto& [key, cell] : out.cells) cell.positions = cell.overridden;

  std::map<BaseId, std::map<Craft, int>> by_base;
  for (const auto& [key, cell] : out.cells) {
    if (cell.overridden > 0) by_base[key.first][key.second] = cell.overridden;
  }

  for (const auto& [base_id, crafts] : by_base) {
    const MaintenanceBase& base = ds.base(base_id);
    if (base.open_shifts.empty()) {
      throw WorkloadError("base " + base_id + " has allotted positions but no open shifts");
    }
    int headcount = 0;
    for (const auto& [c, n] : crafts) headcount += n;

    auto quotas = shift_quotas(base, headcount, config, out.findings);
    std::map<Craft, int> pool = crafts;
    for (auto& [shift, quota] : quotas) {
      int need = quota;
      for (Craft c : kShiftFillOrder) {
        auto it = pool.find(c);
        if (it == pool.end() || it->second == 0 || need == 0) continue;
        const int take = std::min(need, it->second);
        out.positions[{base_id, c, shift}] += take;
        it->second -= take;
        need -= take;
      }
    }

    if (config.min_crew_exemptions.count(base_id)) continue;
    for (const auto& [shift, quota] : quotas) {
      if (quota == 0 || quota >= config.min_crew) continue;
      Craft lead = Craft::Maintainer;
      int best = -1;
      for (Craft c : kAllCrafts) {
        auto it = out.positions.find({base_id, c, shift});
        if (it != out.positions.end() && it->second > best) {
          best = it->second;
          lead = c;
        }
      }
      const int add = config.min_crew - quota;
      out.positions[{base_id, lead, shift}] += add;
      out.cells[{base_id, lead}].positions += add;
    }
  }
  return out;
}

std::map<std::pair<DivisionId, ShiftId>, int> vacation_relief(const AllotmentTable& allot, const Dataset& ds,
                                                               const EngineConfig& config) {
  std::map<std::pair<DivisionId, ShiftId>, double> absent;
  for (const auto& [key, n] : allot.positions) {
    const auto& [base, craft, shift] = key;
    absent[{ds.base(base).division, shift}] += n * config.pfnw_days(craft);
  }
  std::map<std::pair<DivisionId, ShiftId>, int> out;
  for (const auto& [key, days] : absent) {
    out[key] = static_cast<int>(std::ceil(days / config.weekdays_per_year - 1e-9));
  }
  return out;
}

std::map<DivisionId, int> heavy_gangs(const std::map<DivisionId, Division>& divisions, int gang_size) {
  std::map<DivisionId, int> out;
  for (const auto& [id, div] : divisions) out[id] = gang_size;
  return out;
}

CoverageResult allocate_from_demand(const Dataset& ds, const DemandTable& demand, const EngineConfig& config) {
  CoverageResult r;
  StageLedger& ledger = r.ledger;
  ledger.day_hours = config.day_hours;
  ledger.weekdays_per_year = config.weekdays_per_year;
  for (Craft c : kAllCrafts) ledger.pfnw_days[c] = config.pfnw_days(c);

  const DemandTable hosted =
      stage("craft_hosts", [&] { return apply_craft_hosts(demand, config.craft_hosts, ds, &ledger.hosted); });

  std::map<CellKey, double> fte;
  stage("productive_hours", [&] {
    auto add_cell = [&](const CellKey& key, const DemandCell& cell) {
      const MaintenanceBase& base = known_base(ds, key.first, "demand");
      if (base.closed()) {
        if (cell.total_man_hours() > 0.0) throw WorkloadError("closed base " + key.first + " still carries demand");
        return;
      }
      CellLedger& entry = ledger.cells[key];
      entry.base = key.first;
      entry.craft = key.second;
      entry.demand = cell;
      const double days = config.pfnw_days(key.second);
      entry.available_hours = available_hours(days, config.day_hours, config.weekdays_per_year);
      auto ov = config.productive_overrides.find(key);
      if (ov != config.productive_overrides.end()) {
        entry.productive_hours = ov->second;
        entry.productive_overridden = true;
      } else {
        auto p = config.pfnw.find(key.second);
        entry.productive_hours = productive_hours(p == config.pfnw.end() ? PfnwProfile{} : p->second, base,
                                                  config.day_hours, config.weekdays_per_year);
      }
      if (entry.productive_hours > entry.available_hours) {
        throw ConfigError("productive hours for (" + key.first + ", craft " + std::to_string(to_int(key.second)) +
                          ") exceed the hours available after PFNW");
      }
    };
    for (const auto& [key, cell] : hosted) add_cell(key, cell);
    for (const auto& [key, n] : config.position_overrides) {
      known_base(ds, key.first, "position override");
      if (!ledger.cells.count(key)) add_cell(key, DemandCell{});
    }
    return 0;
  });

  stage("compute_fte", [&] {
    for (const auto& [key, entry] : ledger.cells) {
      fte[key] = compute_fte(entry.demand.total_man_hours(), entry.productive_hours);
    }
    return 0;
  });

  r.allotment = stage("allot_positions", [&] { return allot_positions(fte, ds, config); });
  for (const auto& [key, cell] : r.allotment.cells) {
    auto it = ledger.cells.find(key);
    if (it == ledger.cells.end()) throw WorkloadError("allotment cell without a ledger entry: " + key.first);
    it->second.rounding = cell;
  }

  r.allotment.relief = stage("vacation_relief", [&] { return vacation_relief(r.allotment, ds, config); });
  r.allotment.heavy_gangs = stage("heavy_gangs", [&] { return heavy_gangs(ds.divisions, config.heavy_gang_size); });
  return r;
}

CoverageResult run_coverage_pipeline(const Dataset& ds, const std::vector<std::vector<GangHours>>& streams,
                                     const EngineConfig& config) {
  const DemandTable demand = stage("aggregate_demand", [&] { return aggregate_demand_table(streams, config.crew); });
  return allocate_from_demand(ds, demand, config);
}

namespace {

struct AllotmentRow {
  double gang[3] = {0, 0, 0};
  double man[4] = {0, 0, 0, 0};
  double fte[4] = {0, 0, 0, 0};
  int allotted[4] = {0, 0, 0, 0};

  void add(const AllotmentRow& o) {
    for (int i = 0; i < 3; ++i) gang[i] += o.gang[i];
    for (int i = 0; i < 4; ++i) {
      man[i] += o.man[i];
      fte[i] += o.fte[i];
      allotted[i] += o.allotted[i];
    }
  }
};

AllotmentRow row_for(const CoverageResult& r, const BaseId& base) {
  AllotmentRow row;
  for (Craft c : kAllCrafts) {
    const int i = to_int(c) - 1;
    auto it = r.ledger.cells.find({base, c});
    if (it != r.ledger.cells.end()) {
      const DemandCell& d = it->second.demand;
      for (Category cat : kAllCategories) {
        auto g = d.gang_hours.find(cat);
        if (g != d.gang_hours.end()) row.gang[static_cast<int>(cat)] += g->second;
      }
      row.man[i] = d.total_man_hours();
    }
    auto f = r.allotment.cells.find({base, c});
    if (f != r.allotment.cells.end()) row.fte[i] = f->second.fte;
    row.allotted[i] = r.allotment.positions_for(base, c);
  }
  return row;
}

// Divisions in id order, each with its bases in id order.
std::map<DivisionId, std::vector<BaseId>> bases_by_division(const Dataset& ds) {
  std::map<DivisionId, std::vector<BaseId>> out;
  for (const auto& [id, div] : ds.divisions) out[id];
  for (const auto& [id, base] : ds.bases) out[base.division].push_back(id);
  return out;
}

void visit_rows(const CoverageResult& r, const Dataset& ds,
                const std::function<void(const std::string&, const std::string&, const MaintenanceBase*,
                                         const AllotmentRow&)>& emit) {
  AllotmentRow system;
  for (const auto& [div, bases] : bases_by_division(ds)) {
    AllotmentRow subtotal;
    for (const auto& b : bases) {
      const AllotmentRow row = row_for(r, b);
      emit(div, b, &ds.base(b), row);
      subtotal.add(row);
    }
    emit(div, "subtotal", nullptr, subtotal);
    system.add(subtotal);
  }
  emit("system", "total", nullptr, system);
}

}  // namespace

void write_allotment_csv(std::ostream& out, const CoverageResult& result, const Dataset& ds) {
  csv::write_row(out, {"division", "base", "fra_gang_hours", "trouble_gang_hours", "nbntt_gang_hours",
                       "man_hours_1", "man_hours_2", "man_hours_3", "man_hours_4", "non_rush_pct",
                       "productive_maint", "productive_other", "fte_1", "fte_2", "fte_3", "fte_4", "allotted_1",
                       "allotted_2", "allotted_3", "allotted_4", "status"});
  visit_rows(result, ds, [&](const std::string& div, const std::string& base, const MaintenanceBase* b,
                             const AllotmentRow& row) {
    std::vector<std::string> f = {div, base};
    for (double g : row.gang) f.push_back(csv::fixed(g, 3));
    for (double m : row.man) f.push_back(csv::fixed(m, 3));
    if (b && !b->closed()) {
      f.push_back(csv::fixed(b->non_rush_pct * 100.0, 1));
      f.push_back(csv::fixed(display_productive(result, *b, Craft::Maintainer), 3));
      f.push_back(csv::fixed(display_productive(result, *b, Craft::Inspector), 3));
    } else {
      f.insert(f.end(), {"", "", ""});
    }
    for (double x : row.fte) f.push_back(csv::fixed(x, 4));
    for (int n : row.allotted) f.push_back(std::to_string(n));
    f.push_back(b ? (b->closed() ? "closed_into:" + *b->closed_into : "open") : "");
    csv::write_row(out, f);
  });
}

void write_allotment_text(std::ostream& out, const CoverageResult& result, const Dataset& ds) {
  text::Table t({"Base", "FRA", "Trouble", "NbnTT", "Man1", "Man2", "Man3", "Man4", "NonRush", "ProdMaint",
                 "ProdOther", "FTE1", "FTE2", "FTE3", "FTE4", "Pos1", "Pos2", "Pos3", "Pos4"});
  std::string current;
  visit_rows(result, ds, [&](const std::string& div, const std::string& base, const MaintenanceBase* b,
                             const AllotmentRow& row) {
    if (div != current && !current.empty()) t.rule();
    current = div;
    std::vector<std::string> f = {b ? base : div + " " + base};
    for (double g : row.gang) f.push_back(csv::fixed(g, 0));
    for (double m : row.man) f.push_back(csv::fixed(m, 0));
    if (b && !b->closed()) {
      f.push_back(csv::fixed(b->non_rush_pct * 100.0, 1) + "%");
      f.push_back(csv::fixed(display_productive(result, *b, Craft::Maintainer), 0));
      f.push_back(csv::fixed(display_productive(result, *b, Craft::Inspector), 0));
    } else {
      f.insert(f.end(), {b ? "closed" : "", "", ""});
    }
    for (double x : row.fte) f.push_back(csv::fixed(x, 2));
    for (int n : row.allotted) f.push_back(std::to_string(n));
    t.add(f);
  });
  t.render(out);
  out << "relief positions: " << result.allotment.relief_total()
      << "  heavy gang positions: " << result.allotment.heavy_total() << '\n';
  for (const auto& finding : result.allotment.findings) out << "note: " << finding << '\n';
}

void write_positions_csv(std::ostream& out, const AllotmentTable& allot, const Dataset& ds) {
  csv::write_row(out, {"kind", "division", "base", "craft", "shift", "positions"});
  for (const auto& [key, n] : allot.positions) {
    const auto& [base, craft, shift] = key;
    csv::write_row(out, {"allotted", ds.base(base).division, base, std::to_string(to_int(craft)), shift,
                         std::to_string(n)});
  }
  for (const auto& [key, n] : allot.relief) {
    csv::write_row(out, {"relief", key.first, "", "", key.second, std::to_string(n)});
  }
  for (const auto& [div, n] : allot.heavy_gangs) {
    csv::write_row(out, {"heavy_gang", div, "", "", "1", std::to_string(n)});
  }
}

}  // namespace sigman
