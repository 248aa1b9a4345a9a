// Command-line front end: validate inputs, compute workloads, allot
// positions, write reports and run base-closure what-ifs.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sigman/config.hpp"
#include "sigman/csv.hpp"
#include "sigman/engine.hpp"
#include "sigman/registry.hpp"
#include "sigman/scenario.hpp"

namespace fs = std::filesystem;
using namespace sigman;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kHardError = 2;

struct Options {
  std::string manifest;
  std::string config;
  std::string out;
  std::string base;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "dataset manifest.json")->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", o.config, "engine config JSON (defaults when omitted)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "directory for output files");
}

EngineConfig load_config(const Options& o) {
  return o.config.empty() ? EngineConfig::defaults() : EngineConfig::read(o.config);
}

std::optional<fs::path> config_path(const Options& o) {
  if (o.config.empty()) return std::nullopt;
  return fs::path(o.config);
}

void print_findings(const ValidationReport& report, std::ostream& out) {
  for (const auto& f : report.findings) {
    out << severity_name(f.severity) << ' ' << finding_kind_name(f.kind) << ' ' << f.location;
    if (!f.test.empty()) out << ' ' << f.test;
    out << ": " << f.message << '\n';
  }
}

std::string findings_csv(const ValidationReport& report) {
  std::ostringstream s;
  csv::write_row(s, {"severity", "kind", "location", "test", "message"});
  for (const auto& f : report.findings) {
    csv::write_row(s, {std::string(severity_name(f.severity)), std::string(finding_kind_name(f.kind)), f.location,
                       f.test, f.message});
  }
  return s.str();
}

// Loads the dataset and refuses to go on when validation reports errors.
std::optional<Dataset> load_checked(const Options& o) {
  Dataset ds = load_dataset(fs::path(o.manifest));
  for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  const ValidationReport report = validate_dataset(ds);
  if (report.has_errors()) {
    print_findings(report, std::cerr);
    return std::nullopt;
  }
  return ds;
}

void finish(const Options& o, const std::string& verb, const std::vector<std::string>& outputs) {
  if (o.out.empty()) return;
  write_run_manifest(o.out, verb, fs::path(o.manifest), config_path(o), outputs);
  std::cout << "wrote " << outputs.size() << " files and run_manifest.json to " << o.out << '\n';
}

int run_validate(const Options& o) {
  LoadOptions lenient;
  lenient.allow_orphan_schedule_rows = true;
  const Dataset ds = load_dataset(fs::path(o.manifest), lenient);
  for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  const ValidationReport report = validate_dataset(ds);
  print_findings(report, std::cout);
  std::cout << report.findings.size() << " finding(s)\n";
  if (!o.out.empty()) {
    write_output(o.out, "validation.csv", findings_csv(report));
    finish(o, "validate", {"validation.csv"});
  }
  return report.has_errors() ? kFindings : kOk;
}

int run_stage(const Options& o, const std::string& verb) {
  const auto ds = load_checked(o);
  if (!ds) return kFindings;
  const EngineConfig config = load_config(o);
  const PipelineRun run = run_pipeline(*ds, config);

  std::vector<std::string> outputs;
  if (verb == "base") {
    std::cout << "FRA gang-hours: " << csv::fixed(run.base.total(), 3) << '\n';
    if (!o.out.empty()) {
      write_output(o.out, "base_workload.csv", [&] {
        std::ostringstream s;
        write_base_audit_csv(s, run.base);
        return s.str();
      }());
      outputs = {"base_workload.csv"};
    } else {
      write_base_audit_csv(std::cout, run.base);
    }
  } else if (verb == "trouble") {
    std::cout << "trouble gang-hours: " << csv::fixed(run.trouble.total(), 3) << '\n';
    if (!o.out.empty()) {
      std::ostringstream t, s;
      write_trouble_csv(t, run.trouble);
      write_shift_stats_csv(s, run.stats);
      write_output(o.out, "trouble.csv", t.str());
      write_output(o.out, "shift_stats.csv", s.str());
      outputs = {"trouble.csv", "shift_stats.csv"};
    } else {
      write_trouble_csv(std::cout, run.trouble);
    }
  } else if (verb == "nbntt") {
    std::cout << "nBnTT gang-hours: " << csv::fixed(run.nbntt.total(), 3) << '\n';
    for (const auto& w : run.nbntt.warnings) std::cerr << "warning: " << w << '\n';
    if (!o.out.empty()) {
      std::ostringstream s;
      write_nbntt_csv(s, run.nbntt);
      write_output(o.out, "nbntt.csv", s.str());
      outputs = {"nbntt.csv"};
    } else {
      write_nbntt_csv(std::cout, run.nbntt);
    }
  } else if (verb == "coverage") {
    write_allotment_text(std::cout, run.coverage, run.dataset);
    if (!o.out.empty()) outputs = write_coverage_outputs(run, o.out);
  } else {
    write_allotment_text(std::cout, run.coverage, run.dataset);
    std::cout << '\n';
    write_time_allocation_text(std::cout, run.time_allocation);
    std::cout << '\n';
    write_utilization_text(std::cout, run.utilization);
    if (run.stress) {
      std::cout << '\n';
      write_stress_text(std::cout, *run.stress);
    }
    if (!o.out.empty()) outputs = write_report_outputs(run, o.out);
  }
  finish(o, verb, outputs);
  return kOk;
}

int run_scenario(const Options& o) {
  const auto ds = load_checked(o);
  if (!ds) return kFindings;
  const ScenarioResult r = scenario_close_location(*ds, o.base, load_config(o));
  write_scenario_text(std::cout, r);
  if (!o.out.empty()) {
    std::ostringstream delta, text;
    write_scenario_delta_csv(delta, r);
    write_scenario_text(text, r);
    write_output(o.out, "scenario_delta.csv", delta.str());
    write_output(o.out, "scenario.txt", text.str());
    finish(o, "scenario close-location " + o.base, {"scenario_delta.csv", "scenario.txt"});
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal maintenance workforce model"};
  app.require_subcommand(1);
  Options o;

  std::map<std::string, CLI::App*> stages;
  CLI::App* validate = app.add_subcommand("validate", "check the dataset and list findings");
  add_common(validate, o);
  for (const char* verb : {"base", "trouble", "nbntt", "coverage", "report"}) {
    static const std::map<std::string, std::string> help = {
        {"base", "FRA test gang-hours per base and craft"},
        {"trouble", "repair gang-hours from fault counts and ticket history"},
        {"nbntt", "non-base, non-trouble task gang-hours"},
        {"coverage", "FTE and allotted positions per base, craft and shift"},
        {"report", "every table: allotment, time allocation, utilization, stress"}};
    stages[verb] = app.add_subcommand(verb, help.at(verb));
    add_common(stages[verb], o);
  }
  CLI::App* scenario = app.add_subcommand("scenario", "what-if runs");
  scenario->require_subcommand(1);
  CLI::App* close = scenario->add_subcommand("close-location", "close a base and fold it into its neighbour");
  close->add_option("base", o.base, "base id to close")->required();
  add_common(close, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kHardError;
  }

  try {
    if (validate->parsed()) return run_validate(o);
    if (close->parsed()) return run_scenario(o);
    for (const auto& [verb, cmd] : stages) {
      if (cmd->parsed()) return run_stage(o, verb);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHardError;
  }
  return kHardError;
}
