#include "sigman/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sigman/csv.hpp"

namespace sigman {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kScheduleColumns = {"location_id", "test_id", "frequency",
                                                   "performer", "craft"};
const std::vector<std::string> kTaskColumns = {"description", "per_each", "annual_occurrences",
                                               "work_hours", "crew"};
const std::vector<std::string> kTicketColumns = {"ticket_id", "location_id", "fault_type",
                                                 "opened_at", "closed_at"};
const std::vector<std::string> kPayrollColumns = {"base_id", "craft", "positions"};

std::vector<std::string> fault_columns() {
  std::vector<std::string> cols = {"location_id"};
  for (int f = 1; f <= kFaultTypes; ++f) cols.push_back(std::to_string(f));
  return cols;
}

json read_json(const fs::path& path) {
  const std::string text = csv::read_file(path.string());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(path.string(), line, e.what());
  }
}

// JSON objects carry a fixed key set; anything else is rejected.
void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, 0, "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(where, 0, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where, 0, std::string("missing key '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where, 0, std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> optional_key(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return required<T>(obj, key, where);
}

Craft parse_craft(const std::string& s, const csv::Table& t, const csv::Row& row) {
  try {
    return craft_from_int(std::stoi(s));
  } catch (const std::exception&) {
    t.fail(row, "invalid craft '" + s + "'");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += items[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Member-file readers

void load_catalog(Dataset& ds, const fs::path& path) {
  const json doc = read_json(path);
  const std::string where = path.string();
  check_keys(doc, {"tests"}, where);
  for (const auto& t : required<json>(doc, "tests", where)) {
    check_keys(t, {"id", "name", "frequency", "craft", "addon_of"}, where);
    TestCatalogEntry e;
    e.id = required<std::string>(t, "id", where);
    e.name = required<std::string>(t, "name", where);
    try {
      e.default_frequency = Frequency::parse(required<std::string>(t, "frequency", where));
      e.craft = craft_from_int(optional_key<int>(t, "craft", where).value_or(1));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(where, 0, "test '" + e.id + "': " + err.what());
    }
    e.addon_of = optional_key<std::string>(t, "addon_of", where);
    const TestId id = e.id;
    if (!ds.catalog.emplace(id, std::move(e)).second) {
      throw DuplicateKeyError(where + ": duplicate test id '" + id + "'");
    }
  }
  for (const auto& [id, e] : ds.catalog) {
    if (!e.addon_of) continue;
    if (*e.addon_of == id) throw ReferenceError(where + ": test '" + id + "' is an add-on of itself");
    if (!ds.catalog.count(*e.addon_of)) {
      throw ReferenceError(where + ": test '" + id + "' is an add-on of unknown test '" +
                           *e.addon_of + "'");
    }
  }
}

UnitTimeMatrix parse_unit_times(const json& doc, const std::string& where) {
  check_keys(doc, {"day_hours", "rows"}, where);
  UnitTimeMatrix m;
  m.day_hours = optional_key<double>(doc, "day_hours", where).value_or(8.0);
  if (!(m.day_hours > 0)) throw ParseError(where, 0, "day_hours must be positive");
  std::set<TestId> seen;
  for (const auto& r : required<json>(doc, "rows", where)) {
    check_keys(r, {"tests", "name", "cells"}, where);
    UnitTimeRow row;
    row.tests = required<std::vector<std::string>>(r, "tests", where);
    row.name = optional_key<std::string>(r, "name", where).value_or("");
    const json& cells = required<json>(r, "cells", where);
    if (!cells.is_array() || cells.size() != 5) {
      throw ParseError(where, 0, "row '" + row.name + "' needs exactly 5 cells");
    }
    for (std::size_t i = 0; i < 5; ++i) {
      if (cells[i].is_null()) continue;
      if (!cells[i].is_number()) throw ParseError(where, 0, "row '" + row.name + "': non-numeric cell");
      const double v = cells[i].get<double>();
      if (!(v > 0)) throw ParseError(where, 0, "row '" + row.name + "': unit times must be > 0");
      row.cells[i].gang_days = v;
    }
    if (row.tests.empty()) throw ParseError(where, 0, "row '" + row.name + "' lists no tests");
    for (const auto& t : row.tests) {
      if (!seen.insert(t).second) throw DuplicateKeyError(where + ": test '" + t + "' has two rows");
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::set<ShiftSlot> parse_slots(const json& arr, const std::string& where) {
  std::set<ShiftSlot> slots;
  for (const auto& s : arr) {
    check_keys(s, {"shift", "day"}, where);
    ShiftSlot slot;
    slot.shift = required<std::string>(s, "shift", where);
    slot.day = day_class_from_string(required<std::string>(s, "day", where));
    slots.insert(slot);
  }
  return slots;
}

void load_network(Dataset& ds, const fs::path& path) {
  const json doc = read_json(path);
  const std::string where = path.string();
  check_keys(doc, {"divisions", "bases", "locations"}, where);

  for (const auto& d : required<json>(doc, "divisions", where)) {
    check_keys(d, {"id", "anchor_base"}, where);
    Division div;
    div.id = required<std::string>(d, "id", where);
    div.anchor_base = optional_key<std::string>(d, "anchor_base", where);
    const DivisionId id = div.id;
    if (!ds.divisions.emplace(id, std::move(div)).second) {
      throw DuplicateKeyError(where + ": duplicate division '" + id + "'");
    }
  }

  for (const auto& b : required<json>(doc, "bases", where)) {
    check_keys(b, {"id", "division", "open_shifts", "non_rush_pct", "adjacent_bases", "yards",
                   "closed_into"},
               where);
    MaintenanceBase base;
    base.id = required<std::string>(b, "id", where);
    base.division = required<std::string>(b, "division", where);
    base.open_shifts = parse_slots(b.value("open_shifts", json::array()), where);
    base.non_rush_pct = required<double>(b, "non_rush_pct", where);
    base.adjacent_bases = b.value("adjacent_bases", std::vector<std::string>{});
    base.yards = b.value("yards", std::vector<std::string>{});
    base.closed_into = optional_key<std::string>(b, "closed_into", where);
    if (!(base.non_rush_pct > 0 && base.non_rush_pct <= 1)) {
      throw ParseError(where, 0, "base '" + base.id + "': non_rush_pct must be in (0, 1]");
    }
    if (!ds.divisions.count(base.division)) {
      throw ReferenceError(where + ": base '" + base.id + "' names unknown division '" +
                           base.division + "'");
    }
    const BaseId id = base.id;
    if (!ds.bases.emplace(id, std::move(base)).second) {
      throw DuplicateKeyError(where + ": duplicate base '" + id + "'");
    }
  }
  for (const auto& [id, base] : ds.bases) {
    for (const auto& adj : base.adjacent_bases) {
      if (!ds.bases.count(adj)) {
        throw ReferenceError(where + ": base '" + id + "' lists unknown adjacent base '" + adj + "'");
      }
    }
    if (base.closed_into && !ds.bases.count(*base.closed_into)) {
      throw ReferenceError(where + ": base '" + id + "' closed into unknown base '" +
                           *base.closed_into + "'");
    }
  }
  for (const auto& [id, div] : ds.divisions) {
    if (!div.anchor_base) continue;
    auto it = ds.bases.find(*div.anchor_base);
    if (it == ds.bases.end()) {
      throw ReferenceError(where + ": division '" + id + "' anchor base '" + *div.anchor_base +
                           "' does not exist");
    }
    if (it->second.division != id) {
      throw ReferenceError(where + ": division '" + id + "' anchor base '" + *div.anchor_base +
                           "' belongs to division '" + it->second.division + "'");
    }
  }

  for (const auto& l : required<json>(doc, "locations", where)) {
    check_keys(l, {"id", "line", "milepost", "apparatus", "location_type", "base", "division", "origin_base"},
               where);
    FieldLocation loc;
    loc.id = required<std::string>(l, "id", where);
    loc.line = optional_key<std::string>(l, "line", where).value_or("");
    loc.milepost = optional_key<double>(l, "milepost", where).value_or(0.0);
    loc.apparatus = l.value("apparatus", Apparatus{});
    loc.base = required<std::string>(l, "base", where);
    for (const auto& [kind, n] : loc.apparatus) {
      if (n < 0) throw ParseError(where, 0, "location '" + loc.id + "': negative count for " + kind);
    }
    auto base_it = ds.bases.find(loc.base);
    if (base_it == ds.bases.end()) {
      throw ReferenceError(where + ": location '" + loc.id + "' names unknown base '" + loc.base + "'");
    }
    loc.origin_base = optional_key<std::string>(l, "origin_base", where);
    if (loc.origin_base) {
      base_it = ds.bases.find(*loc.origin_base);
      if (base_it == ds.bases.end()) {
        throw ReferenceError(where + ": location '" + loc.id + "' names unknown origin base '" +
                             *loc.origin_base + "'");
      }
    }
    loc.division = base_it->second.division;
    if (auto div = optional_key<std::string>(l, "division", where); div && *div != loc.division) {
      throw ReferenceError(where + ": location '" + loc.id + "' division '" + *div +
                           "' disagrees with its base's division '" + loc.division + "'");
    }
    const auto declared = optional_key<int>(l, "location_type", where);
    bool has_apparatus = false;
    for (const auto& [kind, n] : loc.apparatus) has_apparatus |= n > 0;
    try {
      if (has_apparatus) {
        loc.type = classify_location(loc.apparatus);
        if (declared && location_type_from_int(*declared) != loc.type) {
          throw Error("declared type " + std::to_string(*declared) +
                      " disagrees with apparatus (classified as " +
                      std::to_string(to_int(loc.type)) + ")");
        }
      } else if (declared) {
        loc.type = location_type_from_int(*declared);
      } else {
        throw Error("needs apparatus or a location_type");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(where, 0, "location '" + loc.id + "': " + err.what());
    }
    const LocationId id = loc.id;
    if (!ds.locations.emplace(id, std::move(loc)).second) {
      throw DuplicateKeyError(where + ": duplicate location '" + id + "'");
    }
  }
}

void load_schedule(Dataset& ds, const fs::path& path, const LoadOptions& options) {
  const auto table = csv::Table::read(path.string(), kScheduleColumns, {"shift_preference"});
  std::set<std::pair<LocationId, TestId>> seen;
  for (const auto& row : table.rows()) {
    WorkScheduleEntry e;
    e.location = table.at(row, "location_id");
    e.test = table.at(row, "test_id");
    e.performer = table.at(row, "performer");
    e.shift_preference = table.get(row, "shift_preference");
    auto cat = ds.catalog.find(e.test);
    if (cat == ds.catalog.end()) {
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) + ": unknown test '" +
                           e.test + "'");
    }
    if (!ds.unit_times.row_for(e.test)) {
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) + ": test '" + e.test +
                           "' has no unit-time row");
    }
    try {
      const auto freq = table.get(row, "frequency");
      e.frequency = freq ? Frequency::parse(*freq) : cat->second.default_frequency;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      table.fail(row, err.what());
    }
    const auto craft = table.get(row, "craft");
    e.craft = craft ? parse_craft(*craft, table, row) : cat->second.craft;
    if (!seen.emplace(e.location, e.test).second) {
      throw DuplicateKeyError(table.source() + ":" + std::to_string(row.line) +
                              ": duplicate schedule entry (" + e.location + ", " + e.test + ")");
    }
    if (!ds.locations.count(e.location)) {
      if (options.allow_orphan_schedule_rows) {
        ds.orphan_schedule.push_back(std::move(e));
        continue;
      }
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) +
                           ": schedule references unknown location '" + e.location + "'");
    }
    ds.schedule.push_back(std::move(e));
  }
  if (ds.schedule.empty()) ds.warnings.push_back(path.string() + ": schedule has no entries");
}

void load_faults(Dataset& ds, const fs::path& path) {
  const auto table = csv::Table::read(path.string(), fault_columns(), {"total"});
  std::set<LocationId> seen;
  for (const auto& row : table.rows()) {
    const LocationId loc = table.at(row, "location_id");
    if (!ds.locations.count(loc)) {
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) +
                           ": fault counts for unknown location '" + loc + "'");
    }
    if (!seen.insert(loc).second) {
      throw DuplicateKeyError(table.source() + ":" + std::to_string(row.line) +
                              ": duplicate fault row for '" + loc + "'");
    }
    long total = 0;
    for (int f = 1; f <= kFaultTypes; ++f) {
      const int n = table.integer(row, std::to_string(f));
      if (n < 0) table.fail(row, "negative fault count");
      total += n;
      if (n > 0) ds.faults.counts[{loc, f}] = n;
    }
    if (table.get(row, "total") && table.integer(row, "total") != total) {
      table.fail(row, "total column " + table.at(row, "total") + " != row sum " + std::to_string(total));
    }
  }
}

void load_tasks(Dataset& ds, const fs::path& path) {
  const auto table = csv::Table::read(path.string(), kTaskColumns, {"scope", "craft"});
  for (const auto& row : table.rows()) {
    NbnttTaskSpec t;
    t.description = table.at(row, "description");
    try {
      t.per_each = per_each_from_string(table.at(row, "per_each"));
    } catch (const Error& err) {
      table.fail(row, err.what());
    }
    t.annual_occurrences = table.number(row, "annual_occurrences");
    t.work_hours = table.number(row, "work_hours");
    t.crew = table.integer(row, "crew");
    if (!(t.annual_occurrences > 0 && t.work_hours > 0 && t.crew > 0)) {
      table.fail(row, "task '" + t.description + "': numeric fields must be > 0");
    }
    if (auto scope = table.get(row, "scope")) t.scope = split_list(*scope);
    for (const auto& s : t.scope) {
      if (!ds.divisions.count(s) && !ds.bases.count(s)) {
        throw ReferenceError(table.source() + ":" + std::to_string(row.line) + ": task scope '" + s +
                             "' is neither a division nor a base");
      }
    }
    if (auto craft = table.get(row, "craft")) t.craft = parse_craft(*craft, table, row);
    ds.tasks.push_back(std::move(t));
  }
}

void load_tickets(Dataset& ds, const fs::path& path) {
  const auto table = csv::Table::read(path.string(), kTicketColumns);
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    TicketRecord t;
    t.id = table.at(row, "ticket_id");
    t.location = table.at(row, "location_id");
    t.fault_type = table.integer(row, "fault_type");
    try {
      t.opened_at = parse_timestamp(table.at(row, "opened_at"));
      t.closed_at = parse_timestamp(table.at(row, "closed_at"));
    } catch (const Error& err) {
      table.fail(row, err.what());
    }
    if (t.fault_type < 1 || t.fault_type > kFaultTypes) table.fail(row, "fault_type out of range");
    if (t.closed_at < t.opened_at) table.fail(row, "ticket '" + t.id + "' closes before it opens");
    if (!ds.locations.count(t.location)) {
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) + ": ticket '" + t.id +
                           "' at unknown location '" + t.location + "'");
    }
    if (!seen.insert(t.id).second) {
      throw DuplicateKeyError(table.source() + ":" + std::to_string(row.line) +
                              ": duplicate ticket id '" + t.id + "'");
    }
    ds.tickets.push_back(std::move(t));
  }
}

std::vector<DayWindow> parse_windows(const json& arr, const std::string& where) {
  std::vector<DayWindow> out;
  for (const auto& w : arr) {
    if (!w.is_array() || w.size() != 2) throw ParseError(where, 0, "rush window must be [start, end]");
    try {
      out.push_back(DayWindow{parse_clock(w[0].get<std::string>()), parse_clock(w[1].get<std::string>())});
    } catch (const Error& err) {
      throw ParseError(where, 0, err.what());
    }
  }
  return out;
}

RushWindows parse_rush(const json& obj, const std::string& where) {
  check_keys(obj, {"weekday", "weekend"}, where);
  RushWindows r;
  r.weekday = parse_windows(obj.value("weekday", json::array()), where);
  r.weekend = parse_windows(obj.value("weekend", json::array()), where);
  return r;
}

void check_shift_partition(const ShiftCalendar& cal, const std::string& where) {
  std::vector<int> cover(1440, 0);
  std::set<ShiftId> ids;
  for (const auto& s : cal.shifts) {
    if (!ids.insert(s.id).second) throw DuplicateKeyError(where + ": duplicate shift '" + s.id + "'");
    int m = s.window.start_min % 1440;
    const int end = s.window.end_min % 1440;
    do {
      ++cover[static_cast<std::size_t>(m)];
      m = (m + 1) % 1440;
    } while (m != end);
  }
  for (int m = 0; m < 1440; ++m) {
    if (cover[static_cast<std::size_t>(m)] != 1) {
      throw ParseError(where, 0, "shifts must cover each minute of the day exactly once (" +
                                     format_clock(m) + " covered " +
                                     std::to_string(cover[static_cast<std::size_t>(m)]) + " times)");
    }
  }
}

void load_calendar(Dataset& ds, const fs::path& path) {
  const json doc = read_json(path);
  const std::string where = path.string();
  check_keys(doc, {"shifts", "weekend_days", "rush", "location_rush"}, where);
  ShiftCalendar cal;
  for (const auto& s : required<json>(doc, "shifts", where)) {
    check_keys(s, {"id", "start", "end"}, where);
    ShiftDef def;
    def.id = required<std::string>(s, "id", where);
    try {
      def.window = DayWindow{parse_clock(required<std::string>(s, "start", where)),
                             parse_clock(required<std::string>(s, "end", where))};
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(where, 0, err.what());
    }
    cal.shifts.push_back(def);
  }
  check_shift_partition(cal, where);
  if (doc.contains("weekend_days")) {
    cal.weekend_days.clear();
    for (int d : doc.at("weekend_days").get<std::vector<int>>()) {
      if (d < 1 || d > 7) throw ParseError(where, 0, "weekend_days uses ISO weekdays 1..7");
      cal.weekend_days.insert(d);
    }
  }
  if (doc.contains("rush")) cal.default_rush = parse_rush(doc.at("rush"), where);
  if (doc.contains("location_rush")) {
    for (const auto& [loc, r] : doc.at("location_rush").items()) {
      if (!ds.locations.count(loc)) {
        throw ReferenceError(where + ": rush windows for unknown location '" + loc + "'");
      }
      cal.location_rush[loc] = parse_rush(r, where);
    }
  }
  ds.calendar = std::move(cal);
}

void load_repair_profiles(Dataset& ds, const fs::path& path) {
  const json doc = read_json(path);
  const std::string where = path.string();
  check_keys(doc, {"profiles"}, where);
  for (const auto& p : required<json>(doc, "profiles", where)) {
    check_keys(p, {"fault_type", "hours_per_ticket", "crew"}, where);
    RepairProfile prof;
    prof.fault_type = required<int>(p, "fault_type", where);
    prof.hours_per_ticket = required<double>(p, "hours_per_ticket", where);
    if (prof.fault_type < 1 || prof.fault_type > kFaultTypes) {
      throw ParseError(where, 0, "fault_type out of range: " + std::to_string(prof.fault_type));
    }
    if (!(prof.hours_per_ticket > 0)) throw ParseError(where, 0, "hours_per_ticket must be > 0");
    const json crew = required<json>(p, "crew", where);
    if (!crew.is_object()) throw ParseError(where, 0, "crew must be an object of craft -> count");
    for (const auto& [craft, n] : crew.items()) {
      if (!n.is_number_integer()) throw ParseError(where, 0, "crew count for craft '" + craft + "' must be an integer");
      const int count = n.get<int>();
      if (count < 1) throw ParseError(where, 0, "crew counts must be >= 1");
      try {
        prof.crew[craft_from_int(std::stoi(craft))] = count;
      } catch (const std::exception&) {
        throw ParseError(where, 0, "invalid craft '" + craft + "'");
      }
    }
    if (prof.crew.empty()) throw ParseError(where, 0, "profile needs at least one crew entry");
    if (!ds.repair_profiles.emplace(prof.fault_type, prof).second) {
      throw DuplicateKeyError(where + ": duplicate repair profile for fault type " +
                              std::to_string(prof.fault_type));
    }
  }
}

void load_payroll(Dataset& ds, const fs::path& path) {
  const auto table = csv::Table::read(path.string(), kPayrollColumns);
  PayrollSnapshot snap;
  for (const auto& row : table.rows()) {
    const BaseId base = table.at(row, "base_id");
    const Craft craft = parse_craft(table.at(row, "craft"), table, row);
    const int n = table.integer(row, "positions");
    if (n < 0) table.fail(row, "payroll counts must be >= 0");
    if (!ds.bases.count(base)) {
      throw ReferenceError(table.source() + ":" + std::to_string(row.line) + ": payroll for unknown base '" + base + "'");
    }
    if (!snap.counts.emplace(CellKey{base, craft}, n).second) {
      table.fail(row, "duplicate payroll row (" + base + ", " + std::to_string(to_int(craft)) + ")");
    }
  }
  ds.payroll = std::move(snap);
}

void load_required_tests(Dataset& ds, const fs::path& path) {
  const json doc = read_json(path);
  RequiredTests req;
  for (const auto& [kind, tests] : doc.items()) {
    if (!apparatus::is_known_kind(kind)) {
      throw ParseError(path.string(), 0, "unknown apparatus kind '" + kind + "'");
    }
    req[kind] = tests.get<std::vector<std::string>>();
    for (const auto& t : req[kind]) {
      if (!ds.catalog.count(t)) throw ReferenceError(path.string() + ": unknown test '" + t + "'");
    }
  }
  ds.required_tests = std::move(req);
}

}  // namespace

// ---------------------------------------------------------------------------

Manifest Manifest::read(const fs::path& manifest_path) {
  const json doc = read_json(manifest_path);
  const std::string where = manifest_path.string();
  check_keys(doc, {"catalog", "unit_times", "network", "schedule", "faults", "tasks", "tickets",
                   "calendar", "repair_profiles", "payroll", "required_tests"},
             where);
  const fs::path dir = manifest_path.parent_path();
  auto path = [&](const char* key) { return dir / required<std::string>(doc, key, where); };
  auto opt = [&](const char* key) -> std::optional<fs::path> {
    if (auto v = optional_key<std::string>(doc, key, where)) return dir / *v;
    return std::nullopt;
  };
  Manifest m;
  m.catalog = path("catalog");
  m.unit_times = path("unit_times");
  m.network = path("network");
  m.schedule = path("schedule");
  m.faults = path("faults");
  m.tasks = path("tasks");
  m.tickets = opt("tickets");
  m.calendar = opt("calendar");
  m.repair_profiles = opt("repair_profiles");
  m.payroll = opt("payroll");
  m.required_tests = opt("required_tests");
  return m;
}

std::vector<fs::path> Manifest::members() const {
  std::vector<fs::path> out = {catalog, unit_times, network, schedule, faults, tasks};
  for (const auto& p : {tickets, calendar, repair_profiles, payroll, required_tests}) {
    if (p) out.push_back(*p);
  }
  return out;
}

UnitTimeMatrix read_unit_times(const fs::path& path) {
  return parse_unit_times(read_json(path), path.string());
}

Dataset load_dataset(const fs::path& manifest_path, const LoadOptions& options) {
  return load_dataset(Manifest::read(manifest_path), options);
}

Dataset load_dataset(const Manifest& m, const LoadOptions& options) {
  Dataset ds;
  load_catalog(ds, m.catalog);
  ds.unit_times = parse_unit_times(read_json(m.unit_times), m.unit_times.string());
  load_network(ds, m.network);
  load_schedule(ds, m.schedule, options);
  load_faults(ds, m.faults);
  load_tasks(ds, m.tasks);
  if (m.calendar) load_calendar(ds, *m.calendar);
  if (m.tickets) load_tickets(ds, *m.tickets);
  if (m.repair_profiles) load_repair_profiles(ds, *m.repair_profiles);
  if (m.payroll) load_payroll(ds, *m.payroll);
  if (m.required_tests) load_required_tests(ds, *m.required_tests);
  return ds;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

json windows_json(const std::vector<DayWindow>& ws) {
  json arr = json::array();
  for (const auto& w : ws) arr.push_back({format_clock(w.start_min), format_clock(w.end_min)});
  return arr;
}

json rush_json(const RushWindows& r) {
  return json{{"weekday", windows_json(r.weekday)}, {"weekend", windows_json(r.weekend)}};
}

}  // namespace

void write_dataset(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  json manifest = {{"catalog", "catalog.json"},   {"unit_times", "unit_times.json"},
                   {"network", "network.json"},   {"schedule", "schedule.csv"},
                   {"faults", "faults.csv"},      {"tasks", "tasks.csv"}};

  json tests = json::array();
  for (const auto& [id, t] : ds.catalog) {
    json e = {{"id", t.id}, {"name", t.name}, {"frequency", t.default_frequency.str()},
              {"craft", to_int(t.craft)}};
    if (t.addon_of) e["addon_of"] = *t.addon_of;
    tests.push_back(e);
  }
  write_text(dir / "catalog.json", json{{"tests", tests}}.dump(2) + "\n");

  json rows = json::array();
  for (const auto& r : ds.unit_times.rows) {
    json cells = json::array();
    for (const auto& c : r.cells) cells.push_back(c.gang_days ? json(*c.gang_days) : json(nullptr));
    rows.push_back({{"tests", r.tests}, {"name", r.name}, {"cells", cells}});
  }
  write_text(dir / "unit_times.json",
             json{{"day_hours", ds.unit_times.day_hours}, {"rows", rows}}.dump(2) + "\n");

  json divisions = json::array();
  for (const auto& [id, d] : ds.divisions) {
    json e = {{"id", d.id}};
    if (d.anchor_base) e["anchor_base"] = *d.anchor_base;
    divisions.push_back(e);
  }
  json bases = json::array();
  for (const auto& [id, b] : ds.bases) {
    json slots = json::array();
    for (const auto& s : b.open_shifts) slots.push_back({{"shift", s.shift}, {"day", day_class_name(s.day)}});
    json e = {{"id", b.id},          {"division", b.division},     {"open_shifts", slots},
              {"non_rush_pct", b.non_rush_pct}, {"adjacent_bases", b.adjacent_bases},
              {"yards", b.yards}};
    if (b.closed_into) e["closed_into"] = *b.closed_into;
    bases.push_back(e);
  }
  json locations = json::array();
  for (const auto& [id, l] : ds.locations) {
    json e = {{"id", l.id},
              {"line", l.line},
              {"milepost", l.milepost},
              {"apparatus", l.apparatus},
              {"location_type", to_int(l.type)},
              {"base", l.base},
              {"division", l.division}};
    if (l.origin_base) e["origin_base"] = *l.origin_base;
    locations.push_back(e);
  }
  write_text(dir / "network.json",
             json{{"divisions", divisions}, {"bases", bases}, {"locations", locations}}.dump(2) + "\n");

  {
    std::ostringstream out;
    csv::write_row(out, {"location_id", "test_id", "frequency", "performer", "craft", "shift_preference"});
    auto emit = [&](const WorkScheduleEntry& e) {
      csv::write_row(out, {e.location, e.test, e.frequency.str(), e.performer,
                           std::to_string(to_int(e.craft)), e.shift_preference.value_or("")});
    };
    for (const auto& e : ds.schedule) emit(e);
    for (const auto& e : ds.orphan_schedule) emit(e);
    write_text(dir / "schedule.csv", out.str());
  }
  {
    std::ostringstream out;
    std::vector<std::string> header = fault_columns();
    csv::write_row(out, header);
    std::map<LocationId, std::array<int, kFaultTypes>> by_loc;
    for (const auto& [key, n] : ds.faults.counts) {
      by_loc[key.first][static_cast<std::size_t>(key.second - 1)] = n;
    }
    for (const auto& [loc, counts] : by_loc) {
      std::vector<std::string> fields = {loc};
      for (int n : counts) fields.push_back(std::to_string(n));
      csv::write_row(out, fields);
    }
    write_text(dir / "faults.csv", out.str());
  }
  {
    std::ostringstream out;
    csv::write_row(out, {"description", "per_each", "annual_occurrences", "work_hours", "crew",
                         "scope", "craft"});
    for (const auto& t : ds.tasks) {
      csv::write_row(out, {t.description, std::string(per_each_name(t.per_each)),
                           csv::exact(t.annual_occurrences), csv::exact(t.work_hours),
                           std::to_string(t.crew), join_list(t.scope), std::to_string(to_int(t.craft))});
    }
    write_text(dir / "tasks.csv", out.str());
  }
  if (!ds.tickets.empty()) {
    std::ostringstream out;
    csv::write_row(out, kTicketColumns);
    for (const auto& t : ds.tickets) {
      csv::write_row(out, {t.id, t.location, std::to_string(t.fault_type),
                           format_timestamp(t.opened_at), format_timestamp(t.closed_at)});
    }
    write_text(dir / "tickets.csv", out.str());
    manifest["tickets"] = "tickets.csv";
  }
  if (!ds.calendar.empty()) {
    json shifts = json::array();
    for (const auto& s : ds.calendar.shifts) {
      shifts.push_back({{"id", s.id}, {"start", format_clock(s.window.start_min)},
                        {"end", format_clock(s.window.end_min)}});
    }
    json loc_rush = json::object();
    for (const auto& [loc, r] : ds.calendar.location_rush) loc_rush[loc] = rush_json(r);
    json cal = {{"shifts", shifts},
                {"weekend_days", ds.calendar.weekend_days},
                {"rush", rush_json(ds.calendar.default_rush)},
                {"location_rush", loc_rush}};
    write_text(dir / "calendar.json", cal.dump(2) + "\n");
    manifest["calendar"] = "calendar.json";
  }
  if (!ds.repair_profiles.empty()) {
    json profiles = json::array();
    for (const auto& [f, p] : ds.repair_profiles) {
      json crew = json::object();
      for (const auto& [craft, n] : p.crew) crew[std::to_string(to_int(craft))] = n;
      profiles.push_back({{"fault_type", f}, {"hours_per_ticket", p.hours_per_ticket}, {"crew", crew}});
    }
    write_text(dir / "repair_profiles.json", json{{"profiles", profiles}}.dump(2) + "\n");
    manifest["repair_profiles"] = "repair_profiles.json";
  }
  if (ds.payroll) {
    std::ostringstream out;
    csv::write_row(out, kPayrollColumns);
    for (const auto& [key, n] : ds.payroll->counts) {
      csv::write_row(out, {key.first, std::to_string(to_int(key.second)), std::to_string(n)});
    }
    write_text(dir / "payroll.csv", out.str());
    manifest["payroll"] = "payroll.csv";
  }
  if (ds.required_tests) {
    write_text(dir / "required_tests.json", json(*ds.required_tests).dump(2) + "\n");
    manifest["required_tests"] = "required_tests.json";
  }
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Classification and validation

LocationType classify_location(const Apparatus& apparatus) {
  bool any = false;
  std::vector<std::string> unknown;
  for (const auto& [kind, n] : apparatus) {
    if (n <= 0) continue;
    any = true;
    if (!apparatus::is_known_kind(kind)) unknown.push_back(kind);
  }
  if (!any || !unknown.empty()) {
    std::string listing;
    for (const auto& [kind, n] : apparatus) {
      if (!listing.empty()) listing += ", ";
      listing += kind + " x" + std::to_string(n);
    }
    throw Error("cannot classify location with apparatus {" + listing + "}");
  }
  auto count = [&](std::string_view kind) {
    auto it = apparatus.find(std::string(kind));
    return it == apparatus.end() ? 0 : it->second;
  };
  const int switches = count(apparatus::kSwitchMachine);
  if (switches > 0 || count(apparatus::kMovableBridge) > 0) {
    return switches <= 5 ? LocationType::SmallInterlocking : LocationType::LargeInterlocking;
  }
  if (count(apparatus::kGradeCrossing) > 0) return LocationType::GradeCrossing;
  if (count(apparatus::kHandOperatedSwitch) > 0) return LocationType::HandOperatedSwitch;
  return LocationType::CodePoint;
}

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

std::string_view finding_kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::LocationWithoutSchedule: return "location_without_schedule";
    case FindingKind::TestNotApplicable: return "test_not_applicable";
    case FindingKind::MissingRequiredTest: return "missing_required_test";
    case FindingKind::DecommissionedSuspect: return "decommissioned_suspect";
  }
  return "?";
}

bool ValidationReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

std::size_t ValidationReport::count(FindingKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == kind; }));
}

ValidationReport validate_dataset(const Dataset& ds) {
  ValidationReport report;
  std::map<LocationId, std::set<TestId>> scheduled;
  for (const auto& e : ds.schedule) scheduled[e.location].insert(e.test);

  for (const auto& [id, loc] : ds.locations) {
    if (ds.base(loc.base).closed()) continue;
    if (!scheduled.count(id)) {
      report.findings.push_back({FindingKind::LocationWithoutSchedule, Severity::Warning, id, "",
                                 "location has no schedule entries"});
    }
  }

  for (const auto& e : ds.schedule) {
    const FieldLocation& loc = ds.location(e.location);
    const UnitTimeRow* row = ds.unit_times.row_for(e.test);
    if (row && !row->cells[static_cast<std::size_t>(to_int(loc.type) - 1)].applicable()) {
      report.findings.push_back({FindingKind::TestNotApplicable, Severity::Error, e.location, e.test,
                                 "test " + e.test + " is not applicable at location type " +
                                     std::to_string(to_int(loc.type))});
    }
  }

  if (ds.required_tests) {
    for (const auto& [id, tests] : scheduled) {
      const FieldLocation& loc = ds.location(id);
      std::set<TestId> needed;
      for (const auto& [kind, n] : loc.apparatus) {
        if (n <= 0) continue;
        auto it = ds.required_tests->find(kind);
        if (it != ds.required_tests->end()) needed.insert(it->second.begin(), it->second.end());
      }
      for (const auto& t : needed) {
        if (!tests.count(t)) {
          report.findings.push_back({FindingKind::MissingRequiredTest, Severity::Warning, id, t,
                                     "apparatus requires test " + t + " but it is not scheduled"});
        }
      }
    }
  }

  for (const auto& e : ds.orphan_schedule) {
    report.findings.push_back({FindingKind::DecommissionedSuspect, Severity::Error, e.location, e.test,
                               "schedule entry for a location absent from the registry"});
  }

  std::stable_sort(report.findings.begin(), report.findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.kind, a.location, a.test) < std::tie(b.kind, b.location, b.test);
  });
  return report;
}

}  // namespace sigman
