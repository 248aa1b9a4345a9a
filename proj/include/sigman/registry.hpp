#pragma once

// Dataset loading, location classification and schedule validation.

#include <filesystem>
#include <string>
#include <vector>

#include "sigman/domain.hpp"

namespace sigman {

struct LoadOptions {
  // Keep schedule rows for unknown locations aside (Dataset::orphan_schedule)
  // instead of failing; used by validation runs.
  bool allow_orphan_schedule_rows = false;
};

// Paths of every member file named by a manifest.
struct Manifest {
  std::filesystem::path catalog;
  std::filesystem::path unit_times;
  std::filesystem::path network;
  std::filesystem::path schedule;
  std::filesystem::path faults;
  std::filesystem::path tasks;
  std::optional<std::filesystem::path> tickets;
  std::optional<std::filesystem::path> calendar;
  std::optional<std::filesystem::path> repair_profiles;
  std::optional<std::filesystem::path> payroll;
  std::optional<std::filesystem::path> required_tests;

  static Manifest read(const std::filesystem::path& manifest_path);
  std::vector<std::filesystem::path> members() const;
};

Dataset load_dataset(const std::filesystem::path& manifest_path, const LoadOptions& options = {});
Dataset load_dataset(const Manifest& manifest, const LoadOptions& options = {});

// A unit-time matrix file on its own.
UnitTimeMatrix read_unit_times(const std::filesystem::path& path);

// Writes every member file plus manifest.json into `dir`.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

// Dominant-installation precedence: movable bridge or switch machines ->
// small/large interlocking by switch count; else grade crossing; else hand
// operated switch; else code point / cut section / master location.
LocationType classify_location(const Apparatus& apparatus);

enum class Severity { Info, Warning, Error };
std::string_view severity_name(Severity s);

enum class FindingKind {
  LocationWithoutSchedule,   // (a)
  TestNotApplicable,         // (b)
  MissingRequiredTest,       // (c)
  DecommissionedSuspect,     // (d)
};
std::string_view finding_kind_name(FindingKind k);

struct Finding {
  FindingKind kind;
  Severity severity;
  LocationId location;
  TestId test;  // empty where not applicable
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }
  bool has_errors() const;
  std::size_t count(FindingKind kind) const;
};

// Check (c) runs only when the dataset carries an apparatus -> required-tests map.
ValidationReport validate_dataset(const Dataset& ds);

}  // namespace sigman
