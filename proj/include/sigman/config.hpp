#pragma once

// Engine configuration: calendar constants, PFNW profiles, crew sizes,
// rounding policy, coverage templates and per-cell adjustments.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sigman/domain.hpp"

namespace sigman {

// Paid-for-no-work days per year, itemized (vacation, holidays, sick, ...).
struct PfnwProfile {
  std::map<std::string, double> items;

  double days() const;
  bool operator==(const PfnwProfile&) const = default;
};

// Minimum gang size by (category, craft).
class CrewMatrix {
 public:
  // Every (category, craft) pair set to `size`.
  static CrewMatrix uniform(int size = 2);

  void set(Category category, Craft craft, int size);
  // Throws ConfigError for a pair that was never set.
  int at(Category category, Craft craft) const;

  bool operator==(const CrewMatrix&) const = default;

 private:
  std::map<std::pair<Category, Craft>, int> entries_;
};

struct CoverageTemplate {
  std::string name;
  int positions_required = 0;
  std::set<ShiftSlot> shifts_covered;

  // Distinct shift ids covered, in ascending order.
  std::vector<ShiftId> shift_ids() const;
  bool operator==(const CoverageTemplate&) const = default;
};

enum class RoundingPolicy { Nearest, Ceil, Threshold };

struct Rounding {
  RoundingPolicy policy = RoundingPolicy::Nearest;
  // Threshold policy: round up when the fractional part is >= threshold.
  double threshold = 0.5;

  int apply(double fte) const;
  std::string str() const;
  bool operator==(const Rounding&) const = default;
};

struct EngineConfig {
  double day_hours = 8.0;
  int weekdays_per_year = 261;
  std::map<Craft, PfnwProfile> pfnw;  // a missing craft has no PFNW days
  CrewMatrix crew = CrewMatrix::uniform(2);
  Rounding rounding;
  std::map<CellKey, int> position_overrides;
  std::map<CellKey, double> productive_overrides;
  // (base, craft) demand pooled at another base (e.g. a central shop).
  std::map<CellKey, BaseId> craft_hosts;
  std::vector<CoverageTemplate> templates;
  std::vector<ShiftId> shift_preference = {"1", "2", "3"};
  std::set<BaseId> min_crew_exemptions;
  int min_crew = 2;
  int heavy_gang_size = 4;
  double travel_surcharge_hours = 0.0;
  std::map<DivisionId, BaseId> division_anchors;
  std::map<BaseId, std::vector<BaseId>> adjacency;

  double pfnw_days(Craft craft) const;

  // Defaults include the day, weekday two-shift and continuous templates.
  static EngineConfig defaults();
  static EngineConfig parse(const std::string& text, const std::string& source = "<config>");
  static EngineConfig read(const std::filesystem::path& path);

  bool operator==(const EngineConfig&) const = default;
};

std::vector<CoverageTemplate> default_templates();

}  // namespace sigman
