#include "sigman/nbntt_workload.hpp"

#include <algorithm>
#include <ostream>

#include "sigman/csv.hpp"

namespace sigman {

namespace {

// Units are matched against the scope of the base they belong to, which for
// a closed base or a moved location is not the base that now does the work.
bool in_scope(const BaseId& base, const DivisionId& division, const std::vector<std::string>& scope) {
  if (scope.empty()) return true;
  return std::find(scope.begin(), scope.end(), base) != scope.end() ||
         std::find(scope.begin(), scope.end(), division) != scope.end();
}

bool is_interlocking(const FieldLocation& loc) {
  return loc.type == LocationType::SmallInterlocking || loc.type == LocationType::LargeInterlocking;
}

}  // namespace

int UnitCount::total() const {
  int sum = 0;
  for (const auto& [base, n] : counts) sum += n;
  return sum;
}

UnitCount count_units(const Dataset& ds, PerEach unit, const std::vector<std::string>& scope) {
  UnitCount out;
  auto add = [&](const BaseId& base, int n) {
    if (n > 0) out.counts[base] += n;
  };

  switch (unit) {
    case PerEach::Location:
    case PerEach::Interlocking:
    case PerEach::Bridge:
      for (const auto& [id, loc] : ds.locations) {
        if (!in_scope(loc.origin_base.value_or(loc.base), loc.division, scope)) continue;
        const BaseId& base = ds.responsible_base(loc.base);
        if (unit == PerEach::Location) add(base, 1);
        if (unit == PerEach::Interlocking && is_interlocking(loc)) add(base, 1);
        if (unit == PerEach::Bridge) add(base, loc.count_of(apparatus::kMovableBridge));
      }
      break;
    case PerEach::Division:
      for (const auto& [id, div] : ds.divisions) {
        // Scope on a division task means the division itself must be named
        // (or its anchor base).
        std::optional<BaseId> anchor = div.anchor_base;
        if (!anchor) {
          // First open base of the division, else the first one at all.
          for (const auto& [bid, b] : ds.bases) {
            if (b.division != id) continue;
            if (!anchor) anchor = bid;
            if (!b.closed()) {
              anchor = bid;
              break;
            }
          }
          if (!anchor) continue;
          out.warnings.push_back("division '" + id + "' has no anchor base; using '" + *anchor + "'");
        }
        if (!in_scope(*anchor, ds.base(*anchor).division, scope) &&
            std::find(scope.begin(), scope.end(), id) == scope.end()) {
          continue;
        }
        add(ds.responsible_base(*anchor), 1);
      }
      break;
    case PerEach::Yard:
      for (const auto& [id, base] : ds.bases) {
        if (in_scope(id, base.division, scope)) add(ds.responsible_base(id), static_cast<int>(base.yards.size()));
      }
      break;
    case PerEach::MaintBase:
      for (const auto& [id, base] : ds.bases) {
        if (in_scope(id, base.division, scope)) add(ds.responsible_base(id), 1);
      }
      break;
  }
  if (out.counts.empty()) {
    out.warnings.push_back("no " + std::string(per_each_name(unit)) + " units in scope");
  }
  return out;
}

double NbnttWorkload::total() const {
  double sum = 0.0;
  for (const auto& g : hours) sum += g.hours;
  return sum;
}

NbnttWorkload compute_nbntt_workload(const std::vector<NbnttTaskSpec>& tasks, const Dataset& ds) {
  NbnttWorkload out;
  std::map<CellKey, double> gang;
  for (const auto& task : tasks) {
    const UnitCount units = count_units(ds, task.per_each, task.scope);
    for (const auto& w : units.warnings) out.warnings.push_back(task.description + ": " + w);
    for (const auto& [base, n] : units.counts) {
      const double g = n * task.annual_occurrences * task.work_hours;
      const double m = g * task.crew;
      gang[{base, task.craft}] += g;
      out.man_hours[{base, task.craft}] += m;
      out.audit.push_back(NbnttAuditRow{task.description, base, task.craft, n, g, m});
    }
  }
  for (const auto& [key, h] : gang) {
    GangHours g;
    g.hours = h;
    g.base = key.first;
    g.craft = key.second;
    g.category = Category::NbnTT;
    out.hours.push_back(std::move(g));
  }
  return out;
}

void write_nbntt_csv(std::ostream& out, const NbnttWorkload& workload) {
  csv::write_row(out, {"task", "base", "craft", "units", "gang_hours", "man_hours"});
  for (const auto& r : workload.audit) {
    csv::write_row(out, {r.task, r.base, std::to_string(to_int(r.craft)), std::to_string(r.units),
                         csv::fixed(r.gang_hours, 3), csv::fixed(r.man_hours, 3)});
  }
}

}  // namespace sigman
