#include "sigman/config.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "sigman/csv.hpp"

namespace sigman {

using nlohmann::json;

double PfnwProfile::days() const {
  double sum = 0.0;
  for (const auto& [name, d] : items) sum += d;
  return sum;
}

CrewMatrix CrewMatrix::uniform(int size) {
  CrewMatrix m;
  for (Category cat : kAllCategories) {
    for (Craft c : kAllCrafts) m.set(cat, c, size);
  }
  return m;
}

void CrewMatrix::set(Category category, Craft craft, int size) {
  if (size < 1) {
    throw ConfigError("crew size for (" + std::string(category_name(category)) + ", craft " +
                      std::to_string(to_int(craft)) + ") must be >= 1");
  }
  entries_[{category, craft}] = size;
}

int CrewMatrix::at(Category category, Craft craft) const {
  auto it = entries_.find({category, craft});
  if (it == entries_.end()) {
    throw ConfigError("crew matrix has no entry for (" + std::string(category_name(category)) + ", craft " +
                      std::to_string(to_int(craft)) + ")");
  }
  return it->second;
}

std::vector<ShiftId> CoverageTemplate::shift_ids() const {
  std::vector<ShiftId> out;
  for (const auto& s : shifts_covered) {
    if (std::find(out.begin(), out.end(), s.shift) == out.end()) out.push_back(s.shift);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Rounding::apply(double fte) const {
  if (fte < 0.0) throw ConfigError("negative FTE " + csv::exact(fte));
  switch (policy) {
    case RoundingPolicy::Nearest:
      return static_cast<int>(std::floor(fte + 0.5));
    case RoundingPolicy::Ceil:
      return static_cast<int>(std::ceil(fte));
    case RoundingPolicy::Threshold: {
      const double whole = std::floor(fte);
      return static_cast<int>(whole) + (fte - whole >= threshold ? 1 : 0);
    }
  }
  return 0;
}

std::string Rounding::str() const {
  switch (policy) {
    case RoundingPolicy::Nearest:
      return "nearest";
    case RoundingPolicy::Ceil:
      return "ceil";
    case RoundingPolicy::Threshold:
      return "threshold(" + csv::exact(threshold) + ")";
  }
  return "";
}

double EngineConfig::pfnw_days(Craft craft) const {
  auto it = pfnw.find(craft);
  return it == pfnw.end() ? 0.0 : it->second.days();
}

std::vector<CoverageTemplate> default_templates() {
  CoverageTemplate day{"day", 2, {{"1", DayClass::Weekday}}};
  CoverageTemplate two_shift{"weekday_two_shift", 4, {{"1", DayClass::Weekday}, {"2", DayClass::Weekday}}};
  CoverageTemplate continuous{"continuous", 9, {}};
  for (const char* s : {"1", "2", "3"}) {
    continuous.shifts_covered.insert({s, DayClass::Weekday});
    continuous.shifts_covered.insert({s, DayClass::Weekend});
  }
  return {day, two_shift, continuous};
}

EngineConfig EngineConfig::defaults() {
  EngineConfig c;
  c.templates = default_templates();
  return c;
}

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw ConfigError(source + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T as(const json& v, const std::string& where) {
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
}

Craft craft_key(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    const int code = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return craft_from_int(code);
  } catch (const std::exception&) {
    fail(where, "invalid craft '" + key + "'");
  }
}

// {"BASE": {"craft": value}} -> map
template <typename T>
std::map<CellKey, T> cell_map(const json& obj, const std::string& where) {
  std::map<CellKey, T> out;
  if (!obj.is_object()) fail(where, "expected an object of base -> {craft: value}");
  for (const auto& [base, crafts] : obj.items()) {
    if (!crafts.is_object()) fail(where, "entry for '" + base + "' must be an object");
    for (const auto& [craft, value] : crafts.items()) {
      out[{base, craft_key(craft, where)}] = as<T>(value, where + "." + base + "." + craft);
    }
  }
  return out;
}

PfnwProfile parse_pfnw(const json& obj, const std::string& where) {
  PfnwProfile p;
  if (!obj.is_object()) fail(where, "expected an object of item -> days");
  for (const auto& [item, days] : obj.items()) {
    const double d = as<double>(days, where + "." + item);
    if (d < 0.0) fail(where, "negative PFNW days for '" + item + "'");
    p.items[item] = d;
  }
  return p;
}

}  // namespace

EngineConfig EngineConfig::parse(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source, e.what());
  }
  check_keys(doc,
             {"day_hours", "weekdays_per_year", "pfnw", "crew", "rounding", "position_overrides",
              "productive_overrides", "craft_hosts", "templates", "shift_preference", "min_crew_exemptions",
              "min_crew", "heavy_gang_size", "travel_surcharge_hours", "division_anchors", "adjacency"},
             source);

  EngineConfig c = defaults();
  if (doc.contains("day_hours")) c.day_hours = as<double>(doc["day_hours"], source + ".day_hours");
  if (doc.contains("weekdays_per_year")) {
    c.weekdays_per_year = as<int>(doc["weekdays_per_year"], source + ".weekdays_per_year");
  }
  if (!(c.day_hours > 0.0) || c.day_hours > 24.0) fail(source, "day_hours must be in (0, 24]");
  if (c.weekdays_per_year <= 0 || c.weekdays_per_year > 366) fail(source, "weekdays_per_year must be in 1..366");

  if (doc.contains("pfnw")) {
    const json& p = doc["pfnw"];
    if (!p.is_object()) fail(source, "pfnw must be an object");
    std::optional<PfnwProfile> fallback;
    if (p.contains("default")) fallback = parse_pfnw(p["default"], source + ".pfnw.default");
    for (Craft craft : kAllCrafts) {
      const std::string key = std::to_string(to_int(craft));
      if (p.contains(key)) {
        c.pfnw[craft] = parse_pfnw(p[key], source + ".pfnw." + key);
      } else if (fallback) {
        c.pfnw[craft] = *fallback;
      }
    }
    for (const auto& [key, value] : p.items()) {
      if (key != "default") craft_key(key, source + ".pfnw");
    }
  }

  if (doc.contains("crew")) {
    const json& crew = doc["crew"];
    check_keys(crew, {"FRA", "Trouble", "NbnTT"}, source + ".crew");
    for (const auto& [cat, crafts] : crew.items()) {
      const Category category = category_from_string(cat);
      if (!crafts.is_object()) fail(source, "crew." + cat + " must be an object");
      for (const auto& [craft, n] : crafts.items()) {
        try {
          c.crew.set(category, craft_key(craft, source + ".crew"), as<int>(n, source + ".crew." + cat));
        } catch (const ConfigError& e) {
          fail(source, e.what());
        }
      }
    }
  }

  if (doc.contains("rounding")) {
    const json& r = doc["rounding"];
    check_keys(r, {"policy", "threshold"}, source + ".rounding");
    const std::string policy = as<std::string>(r.value("policy", json("nearest")), source + ".rounding.policy");
    if (policy == "nearest") {
      c.rounding.policy = RoundingPolicy::Nearest;
    } else if (policy == "ceil") {
      c.rounding.policy = RoundingPolicy::Ceil;
    } else if (policy == "threshold") {
      c.rounding.policy = RoundingPolicy::Threshold;
      if (!r.contains("threshold")) fail(source, "threshold policy needs 'threshold'");
    } else {
      fail(source, "unknown rounding policy '" + policy + "'");
    }
    if (r.contains("threshold")) c.rounding.threshold = as<double>(r["threshold"], source + ".rounding.threshold");
    if (!(c.rounding.threshold > 0.0 && c.rounding.threshold <= 1.0)) fail(source, "threshold must be in (0, 1]");
  }

  if (doc.contains("position_overrides")) {
    c.position_overrides = cell_map<int>(doc["position_overrides"], source + ".position_overrides");
    for (const auto& [k, v] : c.position_overrides) {
      if (v < 0) fail(source, "negative position override for " + k.first);
    }
  }
  if (doc.contains("productive_overrides")) {
    c.productive_overrides = cell_map<double>(doc["productive_overrides"], source + ".productive_overrides");
    for (const auto& [k, v] : c.productive_overrides) {
      if (!(v > 0.0)) fail(source, "productive override for " + k.first + " must be > 0");
    }
  }
  if (doc.contains("craft_hosts")) {
    c.craft_hosts = cell_map<std::string>(doc["craft_hosts"], source + ".craft_hosts");
  }

  if (doc.contains("templates")) {
    c.templates.clear();
    if (!doc["templates"].is_array()) fail(source, "templates must be an array");
    for (const json& t : doc["templates"]) {
      const std::string where = source + ".templates";
      check_keys(t, {"name", "positions", "shifts"}, where);
      CoverageTemplate tpl;
      tpl.name = as<std::string>(t.at("name"), where + ".name");
      tpl.positions_required = as<int>(t.at("positions"), where + ".positions");
      for (const json& s : t.at("shifts")) {
        check_keys(s, {"shift", "day"}, where + ".shifts");
        tpl.shifts_covered.insert(
            {as<std::string>(s.at("shift"), where), day_class_from_string(as<std::string>(s.at("day"), where))});
      }
      if (tpl.positions_required < 1 || tpl.shifts_covered.empty()) {
        fail(source, "template '" + tpl.name + "' needs positions >= 1 and at least one shift");
      }
      c.templates.push_back(std::move(tpl));
    }
  }

  if (doc.contains("shift_preference")) {
    c.shift_preference = as<std::vector<std::string>>(doc["shift_preference"], source + ".shift_preference");
  }
  if (doc.contains("min_crew_exemptions")) {
    for (const auto& b : as<std::vector<std::string>>(doc["min_crew_exemptions"], source + ".min_crew_exemptions")) {
      c.min_crew_exemptions.insert(b);
    }
  }
  if (doc.contains("min_crew")) c.min_crew = as<int>(doc["min_crew"], source + ".min_crew");
  if (c.min_crew < 1) fail(source, "min_crew must be >= 1");
  if (doc.contains("heavy_gang_size")) c.heavy_gang_size = as<int>(doc["heavy_gang_size"], source + ".heavy_gang_size");
  if (c.heavy_gang_size < 0) fail(source, "heavy_gang_size must be >= 0");
  if (doc.contains("travel_surcharge_hours")) {
    c.travel_surcharge_hours = as<double>(doc["travel_surcharge_hours"], source + ".travel_surcharge_hours");
  }
  if (c.travel_surcharge_hours < 0.0) fail(source, "travel_surcharge_hours must be >= 0");
  if (doc.contains("division_anchors")) {
    c.division_anchors = as<std::map<std::string, std::string>>(doc["division_anchors"], source + ".division_anchors");
  }
  if (doc.contains("adjacency")) {
    c.adjacency = as<std::map<std::string, std::vector<std::string>>>(doc["adjacency"], source + ".adjacency");
  }

  for (Craft craft : kAllCrafts) {
    if (c.pfnw_days(craft) >= c.weekdays_per_year) {
      fail(source, "PFNW days for craft " + std::to_string(to_int(craft)) + " leave no working days");
    }
  }
  return c;
}

EngineConfig EngineConfig::read(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_file(path.string());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse(text, path.string());
}

}  // namespace sigman
