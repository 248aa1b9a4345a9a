#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "sigman/config.hpp"
#include "sigman/domain.hpp"

namespace sigman::testing {

inline std::filesystem::path source_dir() { return SIGMAN_SOURCE_DIR; }
inline std::filesystem::path sample_manifest() { return source_dir() / "data" / "sample" / "manifest.json"; }
inline std::filesystem::path sample_config() { return source_dir() / "data" / "sample" / "config.json"; }
inline std::filesystem::path fixtures() { return source_dir() / "tests" / "fixtures"; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("sigman-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::set<ShiftSlot> all_slots() {
  std::set<ShiftSlot> out;
  for (const char* s : {"1", "2", "3"}) {
    out.insert({s, DayClass::Weekday});
    out.insert({s, DayClass::Weekend});
  }
  return out;
}

inline MaintenanceBase make_base(const BaseId& id, const DivisionId& div, double non_rush = 1.0,
                                 std::set<ShiftSlot> open = all_slots()) {
  MaintenanceBase b;
  b.id = id;
  b.division = div;
  b.open_shifts = std::move(open);
  b.non_rush_pct = non_rush;
  return b;
}

inline FieldLocation make_location(const LocationId& id, const BaseId& base, const DivisionId& div,
                                   LocationType type) {
  FieldLocation l;
  l.id = id;
  l.line = "Main";
  l.base = base;
  l.division = div;
  l.type = type;
  switch (type) {
    case LocationType::CodePoint:
      l.apparatus = {{"code_point", 1}};
      break;
    case LocationType::GradeCrossing:
      l.apparatus = {{"grade_crossing", 1}};
      break;
    case LocationType::HandOperatedSwitch:
      l.apparatus = {{"hand_operated_switch", 1}};
      break;
    case LocationType::SmallInterlocking:
      l.apparatus = {{"switch_machine", 3}};
      break;
    case LocationType::LargeInterlocking:
      l.apparatus = {{"switch_machine", 8}};
      break;
  }
  return l;
}

// A one-division, one-base dataset with `locations` type-1 locations.
inline Dataset tiny_dataset(int locations = 1, double non_rush = 1.0) {
  Dataset ds;
  ds.divisions["D"] = Division{"D", std::string("AA")};
  ds.bases["AA"] = make_base("AA", "D", non_rush);
  for (int i = 0; i < locations; ++i) {
    const auto l = make_location("L" + std::to_string(i + 1), "AA", "D", LocationType::CodePoint);
    ds.locations[l.id] = l;
  }
  return ds;
}

inline EngineConfig lossless_config() {
  EngineConfig c = EngineConfig::defaults();
  c.heavy_gang_size = 0;
  return c;
}

}  // namespace sigman::testing
