#pragma once

// Replay of the published allotment table: a base per printed row, demand
// taken straight from the man-hour columns and productive hours pinned to the
// printed productive-hours columns.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sigman/config.hpp"
#include "sigman/coverage.hpp"

namespace sigman::testing {

struct TableRow {
  DivisionId division;
  BaseId base;
  double fra_gang = 0, trouble_gang = 0, nbntt_gang = 0, elec_gang = 0, test_gang = 0;
  double man[4] = {0, 0, 0, 0};
  double non_rush = 0;
  double prod_maint = 0, prod_other = 0;
};

struct TableReplay {
  std::vector<TableRow> rows;
  Dataset dataset;
  EngineConfig config;
  DemandTable demand;
  CoverageResult result;
};

std::vector<TableRow> read_table_columns(const std::filesystem::path& csv_path);

// Builds the replay from <dir>/columns.csv and <dir>/config.json and
// runs it through allocate_from_demand. Productive overrides in the config
// file take precedence over the printed columns.
TableReplay run_table_replay(const std::filesystem::path& dir);

}  // namespace sigman::testing
