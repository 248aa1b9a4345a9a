#pragma once

// Domain types shared by every stage of the resourcing engine.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sigman {

using TestId = std::string;
using LocationId = std::string;
using BaseId = std::string;
using DivisionId = std::string;
using GangId = std::string;
using ShiftId = std::string;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class ReferenceError : public Error {
 public:
  using Error::Error;
};

class DuplicateKeyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised when a computation cannot proceed without silently dropping work.
class WorkloadError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Enumerations

enum class Craft : int {
  Maintainer = 1,  // Maintainer or Assistant Inspector
  Inspector = 2,
  ElectronicTechnician = 3,
  TestMaintainer = 4,
};

inline constexpr std::array<Craft, 4> kAllCrafts = {
    Craft::Maintainer, Craft::Inspector, Craft::ElectronicTechnician,
    Craft::TestMaintainer};

Craft craft_from_int(int code);
inline int to_int(Craft c) { return static_cast<int>(c); }
std::string_view craft_name(Craft c);

enum class LocationType : int {
  CodePoint = 1,  // code change point, cut section (slave) or master location
  GradeCrossing = 2,
  HandOperatedSwitch = 3,
  SmallInterlocking = 4,  // five switches or fewer
  LargeInterlocking = 5,  // six switches or more
};

LocationType location_type_from_int(int code);
inline int to_int(LocationType t) { return static_cast<int>(t); }

enum class Category { FRA, Trouble, NbnTT };

inline constexpr std::array<Category, 3> kAllCategories = {
    Category::FRA, Category::Trouble, Category::NbnTT};

std::string_view category_name(Category c);
Category category_from_string(std::string_view s);

enum class DayClass { Weekday, Weekend };

std::string_view day_class_name(DayClass d);
DayClass day_class_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Frequency

struct Frequency {
  enum class Unit { Month, Year };

  int count = 1;
  Unit unit = Unit::Year;

  // Grammar "<int> <Mo|Yr>", case-insensitive, whitespace-tolerant.
  static Frequency parse(std::string_view text);
  std::string str() const;

  bool operator==(const Frequency&) const = default;
};

// Occurrences per year: Month -> 12/count, Year -> 1/count.
double annualize(Frequency freq);

// ---------------------------------------------------------------------------
// Registry records

struct TestCatalogEntry {
  TestId id;
  std::string name;
  Frequency default_frequency;
  Craft craft = Craft::Maintainer;
  std::optional<TestId> addon_of;

  bool operator==(const TestCatalogEntry&) const = default;
};

// Apparatus kind -> installed count.
using Apparatus = std::map<std::string, int>;

namespace apparatus {
inline constexpr std::string_view kSwitchMachine = "switch_machine";
inline constexpr std::string_view kSignal = "signal";
inline constexpr std::string_view kGradeCrossing = "grade_crossing";
inline constexpr std::string_view kHandOperatedSwitch = "hand_operated_switch";
inline constexpr std::string_view kCodePoint = "code_point";
inline constexpr std::string_view kCutSection = "cut_section";
inline constexpr std::string_view kMasterLocation = "master_location";
inline constexpr std::string_view kRelay = "relay";
inline constexpr std::string_view kTrackCircuit = "track_circuit";
inline constexpr std::string_view kOverlay = "overlay";
inline constexpr std::string_view kMovableBridge = "movable_bridge";
inline constexpr std::string_view kHotBoxDetector = "hot_box_detector";
inline constexpr std::string_view kElectricLock = "electric_lock";
inline constexpr std::string_view kBattery = "battery";

bool is_known_kind(std::string_view kind);
}  // namespace apparatus

struct FieldLocation {
  LocationId id;
  std::string line;
  double milepost = 0.0;
  Apparatus apparatus;
  LocationType type = LocationType::CodePoint;
  BaseId base;
  DivisionId division;
  // Base the location belonged to before a what-if closure moved it. Task
  // scopes keep matching this base, so closures move units without
  // dropping or adding any.
  std::optional<BaseId> origin_base;

  int switch_count() const;
  int count_of(std::string_view kind) const;

  bool operator==(const FieldLocation&) const = default;
};

struct ShiftSlot {
  ShiftId shift;
  DayClass day = DayClass::Weekday;

  auto operator<=>(const ShiftSlot&) const = default;
};

struct Division {
  DivisionId id;
  std::optional<BaseId> anchor_base;

  bool operator==(const Division&) const = default;
};

struct MaintenanceBase {
  BaseId id;
  DivisionId division;
  std::set<ShiftSlot> open_shifts;
  double non_rush_pct = 1.0;
  std::vector<BaseId> adjacent_bases;
  std::vector<std::string> yards;
  // Set when a what-if closure folded this base into another. Its yards and
  // tower unit stay listed here and count at the receiving base.
  std::optional<BaseId> closed_into;

  bool closed() const { return closed_into.has_value(); }
  bool is_open(const ShiftSlot& slot) const { return !closed() && open_shifts.count(slot) > 0; }

  bool operator==(const MaintenanceBase&) const = default;
};

struct WorkScheduleEntry {
  LocationId location;
  TestId test;
  Frequency frequency;
  GangId performer;
  Craft craft = Craft::Maintainer;
  std::optional<ShiftId> shift_preference;

  bool operator==(const WorkScheduleEntry&) const = default;
};

// A unit-time cell: gang-days when applicable, nullopt for "not applicable".
struct UnitTime {
  std::optional<double> gang_days;

  bool applicable() const { return gang_days.has_value(); }
  bool operator==(const UnitTime&) const = default;
};

struct UnitTimeRow {
  std::vector<TestId> tests;  // several ids share one row ("10 & 11")
  std::string name;
  std::array<UnitTime, 5> cells;

  bool operator==(const UnitTimeRow&) const = default;
};

struct UnitTimeMatrix {
  std::vector<UnitTimeRow> rows;
  double day_hours = 8.0;

  const UnitTimeRow* row_for(const TestId& test) const;
  bool operator==(const UnitTimeMatrix&) const = default;
};

// ---------------------------------------------------------------------------
// Trouble-ticket inputs

inline constexpr int kFaultTypes = 15;
std::string_view fault_type_name(int fault_type);

struct FaultCountTable {
  // (location, fault type 1..15) -> failures per year
  std::map<std::pair<LocationId, int>, int> counts;

  bool operator==(const FaultCountTable&) const = default;
};

struct RepairProfile {
  int fault_type = 1;
  std::map<Craft, int> crew;  // employees by craft needed to close a ticket
  double hours_per_ticket = 1.0;

  Craft lead_craft() const;
  int crew_size() const;
  bool operator==(const RepairProfile&) const = default;
};

// Seconds since 1970-01-01T00:00 local railroad time.
using Timestamp = std::int64_t;

Timestamp parse_timestamp(std::string_view iso);
std::string format_timestamp(Timestamp t);

struct TicketRecord {
  std::string id;
  LocationId location;
  int fault_type = 1;
  Timestamp opened_at = 0;
  Timestamp closed_at = 0;

  bool operator==(const TicketRecord&) const = default;
};

// [start, end) in minutes after midnight; end <= start wraps past midnight.
struct DayWindow {
  int start_min = 0;
  int end_min = 0;

  bool operator==(const DayWindow&) const = default;
};

struct ShiftDef {
  ShiftId id;
  DayWindow window;

  bool operator==(const ShiftDef&) const = default;
};

struct RushWindows {
  std::vector<DayWindow> weekday;
  std::vector<DayWindow> weekend;

  const std::vector<DayWindow>& for_day(DayClass d) const {
    return d == DayClass::Weekday ? weekday : weekend;
  }
  bool operator==(const RushWindows&) const = default;
};

struct ShiftCalendar {
  std::vector<ShiftDef> shifts;
  // ISO weekday numbers (1 = Monday .. 7 = Sunday) treated as weekend.
  std::set<int> weekend_days = {6, 7};
  RushWindows default_rush;
  std::map<LocationId, RushWindows> location_rush;

  bool empty() const { return shifts.empty(); }
  const RushWindows& rush_for(const LocationId& loc) const;
  bool operator==(const ShiftCalendar&) const = default;
};

std::string format_clock(int minute_of_day);
int parse_clock(std::string_view hhmm);

// ---------------------------------------------------------------------------
// Non-base, non-trouble-ticket tasks

enum class PerEach { Location, Interlocking, Division, Yard, MaintBase, Bridge };

std::string_view per_each_name(PerEach p);
PerEach per_each_from_string(std::string_view s);

struct NbnttTaskSpec {
  std::string description;
  PerEach per_each = PerEach::Location;
  double annual_occurrences = 1.0;
  double work_hours = 1.0;
  int crew = 2;
  std::vector<std::string> scope;  // division or base ids; empty = everywhere
  Craft craft = Craft::Maintainer;

  bool operator==(const NbnttTaskSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Payroll and apparatus requirements

using CellKey = std::pair<BaseId, Craft>;

struct PayrollSnapshot {
  std::map<CellKey, int> counts;

  bool operator==(const PayrollSnapshot&) const = default;
};

// Apparatus kind -> tests every location with that apparatus must receive.
using RequiredTests = std::map<std::string, std::vector<TestId>>;

// ---------------------------------------------------------------------------
// Dataset

struct Dataset {
  std::map<TestId, TestCatalogEntry> catalog;
  UnitTimeMatrix unit_times;
  std::map<DivisionId, Division> divisions;
  std::map<BaseId, MaintenanceBase> bases;
  std::map<LocationId, FieldLocation> locations;
  std::vector<WorkScheduleEntry> schedule;
  FaultCountTable faults;
  std::vector<TicketRecord> tickets;
  std::map<int, RepairProfile> repair_profiles;
  ShiftCalendar calendar;
  std::vector<NbnttTaskSpec> tasks;
  std::optional<PayrollSnapshot> payroll;
  std::optional<RequiredTests> required_tests;

  // Schedule rows naming locations absent from the registry (lenient load only).
  std::vector<WorkScheduleEntry> orphan_schedule;
  std::vector<std::string> warnings;

  const FieldLocation& location(const LocationId& id) const;
  const MaintenanceBase& base(const BaseId& id) const;
  // Follows closed_into to the open base now doing the work.
  const BaseId& responsible_base(const BaseId& id) const;
  const TestCatalogEntry& test(const TestId& id) const;

  bool operator==(const Dataset& other) const;
};

}  // namespace sigman
