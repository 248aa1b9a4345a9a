#pragma once

// Full pipeline: workloads -> coverage -> reports, and the files it writes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sigman/base_workload.hpp"
#include "sigman/config.hpp"
#include "sigman/coverage.hpp"
#include "sigman/nbntt_workload.hpp"
#include "sigman/reporting.hpp"
#include "sigman/trouble_workload.hpp"

namespace sigman {

// Division anchors and adjacency lists from the config replace the dataset's.
Dataset apply_config_overrides(Dataset ds, const EngineConfig& config);

struct PipelineRun {
  Dataset dataset;  // after config overrides
  TicketStatistics stats;
  BaseWorkload base;
  TroubleWorkload trouble;
  NbnttWorkload nbntt;
  CoverageResult coverage;
  TimeAllocationReport time_allocation;
  UtilizationReport utilization;
  std::optional<StressReport> stress;  // only with a payroll snapshot

  std::vector<std::vector<GangHours>> streams() const;
  // Coverage demand (trouble at its off-peak share), summed over every cell.
  double demand_man_hours() const;
};

PipelineRun run_pipeline(const Dataset& ds, const EngineConfig& config);

// Writes `name` under `dir` and returns its path.
std::filesystem::path write_output(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& content);

// Report files for a finished run; returns the file names written.
std::vector<std::string> write_workload_outputs(const PipelineRun& run, const std::filesystem::path& dir);
std::vector<std::string> write_coverage_outputs(const PipelineRun& run, const std::filesystem::path& dir);
std::vector<std::string> write_report_outputs(const PipelineRun& run, const std::filesystem::path& dir);

std::string sha256_hex(const std::string& bytes);

// Hashes of the config, every input member and every output file.
void write_run_manifest(const std::filesystem::path& dir, const std::string& verb,
                        const std::optional<std::filesystem::path>& manifest_path,
                        const std::optional<std::filesystem::path>& config_path,
                        const std::vector<std::string>& outputs);

}  // namespace sigman
