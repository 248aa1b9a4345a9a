#pragma once

// What-if closure of a maintenance base.

#include <iosfwd>

#include "sigman/engine.hpp"

namespace sigman {

// Copy of `ds` with `base` folded into its first open adjacent base. Its
// locations move and remember where they came from; its yards, tower unit and
// any division anchor role count at the receiver through closed_into, and its
// payroll rows move there too. Task scopes are untouched, so total demand is
// unchanged. Throws ConfigError for an already-closed base or one without an
// open neighbour.
Dataset close_base(const Dataset& ds, const BaseId& base);

struct ScenarioResult {
  BaseId closed;
  BaseId receiver;
  PipelineRun before;
  PipelineRun after;
};

ScenarioResult scenario_close_location(const Dataset& ds, const BaseId& base, const EngineConfig& config);

void write_scenario_delta_csv(std::ostream& out, const ScenarioResult& result);
void write_scenario_text(std::ostream& out, const ScenarioResult& result);

}  // namespace sigman
