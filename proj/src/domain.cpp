#include "sigman/domain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace sigman {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

Craft craft_from_int(int code) {
  if (code < 1 || code > 4) throw Error("unknown craft code " + std::to_string(code));
  return static_cast<Craft>(code);
}

std::string_view craft_name(Craft c) {
  switch (c) {
    case Craft::Maintainer: return "Maintainer or Assistant Inspector";
    case Craft::Inspector: return "Inspector";
    case Craft::ElectronicTechnician: return "Electronic Technician";
    case Craft::TestMaintainer: return "Test Maintainer";
  }
  return "?";
}

LocationType location_type_from_int(int code) {
  if (code < 1 || code > 5) throw Error("unknown location type " + std::to_string(code));
  return static_cast<LocationType>(code);
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::FRA: return "FRA";
    case Category::Trouble: return "Trouble";
    case Category::NbnTT: return "NbnTT";
  }
  return "?";
}

Category category_from_string(std::string_view s) {
  const std::string l = lower(trim(s));
  if (l == "fra") return Category::FRA;
  if (l == "trouble") return Category::Trouble;
  if (l == "nbntt") return Category::NbnTT;
  throw Error("unknown workload category '" + std::string(s) + "'");
}

std::string_view day_class_name(DayClass d) {
  return d == DayClass::Weekday ? "weekday" : "weekend";
}

DayClass day_class_from_string(std::string_view s) {
  const std::string l = lower(trim(s));
  if (l == "weekday") return DayClass::Weekday;
  if (l == "weekend") return DayClass::Weekend;
  throw Error("unknown day class '" + std::string(s) + "'");
}

Frequency Frequency::parse(std::string_view text) {
  std::string_view s = trim(text);
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0) throw Error("frequency must start with a count: '" + std::string(text) + "'");
  Frequency f;
  f.count = parse_int(s.substr(0, i), "frequency count");
  if (f.count <= 0) throw Error("frequency count must be positive: '" + std::string(text) + "'");
  const std::string unit = lower(trim(s.substr(i)));
  if (unit == "mo") {
    f.unit = Unit::Month;
  } else if (unit == "yr") {
    f.unit = Unit::Year;
  } else {
    throw Error("frequency unit must be Mo or Yr: '" + std::string(text) + "'");
  }
  return f;
}

std::string Frequency::str() const {
  return std::to_string(count) + (unit == Unit::Month ? " Mo" : " Yr");
}

double annualize(Frequency freq) {
  return freq.unit == Frequency::Unit::Month ? 12.0 / freq.count : 1.0 / freq.count;
}

namespace apparatus {
bool is_known_kind(std::string_view kind) {
  static constexpr std::array<std::string_view, 14> kKinds = {
      kSwitchMachine, kSignal,        kGradeCrossing, kHandOperatedSwitch, kCodePoint,
      kCutSection,    kMasterLocation, kRelay,        kTrackCircuit,       kOverlay,
      kMovableBridge, kHotBoxDetector, kElectricLock, kBattery};
  return std::find(kKinds.begin(), kKinds.end(), kind) != kKinds.end();
}
}  // namespace apparatus

int FieldLocation::count_of(std::string_view kind) const {
  auto it = apparatus.find(std::string(kind));
  return it == apparatus.end() ? 0 : it->second;
}

int FieldLocation::switch_count() const { return count_of(apparatus::kSwitchMachine); }

const UnitTimeRow* UnitTimeMatrix::row_for(const TestId& test) const {
  for (const auto& row : rows) {
    if (std::find(row.tests.begin(), row.tests.end(), test) != row.tests.end()) return &row;
  }
  return nullptr;
}

std::string_view fault_type_name(int fault_type) {
  static constexpr std::array<std::string_view, kFaultTypes> kNames = {
      "Switch",  "Signal",      "Cab Signal", "Track Circuit",  "Track Block",
      "Switch Block", "Fleeting", "Traffic",  "Bridge Span",    "Grade Crossing",
      "CTC",     "Communications", "Detector", "Signal Power", "Other"};
  if (fault_type < 1 || fault_type > kFaultTypes) {
    throw Error("fault type out of range: " + std::to_string(fault_type));
  }
  return kNames[static_cast<std::size_t>(fault_type - 1)];
}

Craft RepairProfile::lead_craft() const {
  Craft lead = Craft::Maintainer;
  int best = -1;
  for (const auto& [craft, n] : crew) {
    if (n > best) {
      best = n;
      lead = craft;
    }
  }
  return lead;
}

int RepairProfile::crew_size() const {
  int total = 0;
  for (const auto& [craft, n] : crew) total += n;
  return total;
}

Timestamp parse_timestamp(std::string_view iso) {
  // YYYY-MM-DDTHH:MM[:SS]  (a space is accepted in place of 'T')
  const std::string_view s = trim(iso);
  auto bad = [&]() { return Error("invalid ISO-8601 timestamp '" + std::string(iso) + "'"); };
  if (s.size() != 16 && s.size() != 19) throw bad();
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') throw bad();
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  try {
    y = parse_int(s.substr(0, 4), "year");
    mo = parse_int(s.substr(5, 2), "month");
    d = parse_int(s.substr(8, 2), "day");
    h = parse_int(s.substr(11, 2), "hour");
    mi = parse_int(s.substr(14, 2), "minute");
    if (s.size() == 19) {
      if (s[16] != ':') throw bad();
      sec = parse_int(s.substr(17, 2), "second");
    }
  } catch (const Error&) {
    throw bad();
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) throw bad();
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  Timestamp days = t >= 0 ? t / 86400 : -((-t + 86399) / 86400);
  Timestamp rem = t - days * 86400;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string format_clock(int minute_of_day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
  return buf;
}

int parse_clock(std::string_view hhmm) {
  const std::string_view s = trim(hhmm);
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw Error("invalid clock time '" + std::string(hhmm) + "'");
  const int h = parse_int(s.substr(0, colon), "hour");
  const int m = parse_int(s.substr(colon + 1), "minute");
  // 24:00 is accepted as end-of-day.
  if (h < 0 || m < 0 || m > 59 || h > 24 || (h == 24 && m != 0)) {
    throw Error("invalid clock time '" + std::string(hhmm) + "'");
  }
  return h * 60 + m;
}

const RushWindows& ShiftCalendar::rush_for(const LocationId& loc) const {
  auto it = location_rush.find(loc);
  return it == location_rush.end() ? default_rush : it->second;
}

std::string_view per_each_name(PerEach p) {
  switch (p) {
    case PerEach::Location: return "Location";
    case PerEach::Interlocking: return "Interlocking";
    case PerEach::Division: return "Division";
    case PerEach::Yard: return "Yard";
    case PerEach::MaintBase: return "Maint. Base";
    case PerEach::Bridge: return "Bridge";
  }
  return "?";
}

PerEach per_each_from_string(std::string_view s) {
  std::string l;
  for (char c : lower(trim(s))) {
    if (std::isalnum(static_cast<unsigned char>(c))) l.push_back(c);
  }
  if (l == "location") return PerEach::Location;
  if (l == "interlocking") return PerEach::Interlocking;
  if (l == "division") return PerEach::Division;
  if (l == "yard") return PerEach::Yard;
  if (l == "maintbase") return PerEach::MaintBase;
  if (l == "bridge") return PerEach::Bridge;
  throw Error("unknown per-each unit '" + std::string(s) + "'");
}

const FieldLocation& Dataset::location(const LocationId& id) const {
  auto it = locations.find(id);
  if (it == locations.end()) throw ReferenceError("unknown location '" + id + "'");
  return it->second;
}

const MaintenanceBase& Dataset::base(const BaseId& id) const {
  auto it = bases.find(id);
  if (it == bases.end()) throw ReferenceError("unknown maintenance base '" + id + "'");
  return it->second;
}

const BaseId& Dataset::responsible_base(const BaseId& id) const {
  const MaintenanceBase* b = &base(id);
  for (std::size_t hops = 0; b->closed(); ++hops) {
    if (hops > bases.size()) throw ReferenceError("closure chain from base '" + id + "' loops");
    b = &base(*b->closed_into);
  }
  return b->id;
}

const TestCatalogEntry& Dataset::test(const TestId& id) const {
  auto it = catalog.find(id);
  if (it == catalog.end()) throw ReferenceError("unknown test '" + id + "'");
  return it->second;
}

bool Dataset::operator==(const Dataset& o) const {
  return catalog == o.catalog && unit_times == o.unit_times && divisions == o.divisions &&
         bases == o.bases && locations == o.locations && schedule == o.schedule &&
         faults == o.faults && tickets == o.tickets && repair_profiles == o.repair_profiles &&
         calendar == o.calendar && tasks == o.tasks && payroll == o.payroll &&
         required_tests == o.required_tests && orphan_schedule == o.orphan_schedule;
}

}  // namespace sigman
