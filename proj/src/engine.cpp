#include "sigman/engine.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "sigman/csv.hpp"
#include "sigman/registry.hpp"

namespace sigman {

namespace fs = std::filesystem;

Dataset apply_config_overrides(Dataset ds, const EngineConfig& config) {
  for (const auto& [div, base] : config.division_anchors) {
    auto d = ds.divisions.find(div);
    if (d == ds.divisions.end()) throw ConfigError("division_anchors names unknown division '" + div + "'");
    auto b = ds.bases.find(base);
    if (b == ds.bases.end()) throw ConfigError("division_anchors names unknown base '" + base + "'");
    if (b->second.division != div) {
      throw ConfigError("anchor base '" + base + "' is not in division '" + div + "'");
    }
    d->second.anchor_base = base;
  }
  for (const auto& [base, adjacent] : config.adjacency) {
    auto b = ds.bases.find(base);
    if (b == ds.bases.end()) throw ConfigError("adjacency names unknown base '" + base + "'");
    for (const auto& a : adjacent) {
      if (!ds.bases.count(a) || a == base) throw ConfigError("adjacency of '" + base + "' names invalid base '" + a + "'");
    }
    b->second.adjacent_bases = adjacent;
  }
  return ds;
}

std::vector<std::vector<GangHours>> PipelineRun::streams() const { return {base.hours, trouble.hours, nbntt.hours}; }

double PipelineRun::demand_man_hours() const {
  double sum = 0.0;
  for (const auto& [key, cell] : coverage.ledger.cells) sum += cell.demand.total_man_hours();
  return sum;
}

PipelineRun run_pipeline(const Dataset& ds, const EngineConfig& config) {
  PipelineRun run;
  run.dataset = apply_config_overrides(ds, config);
  const Dataset& d = run.dataset;
  run.base = compute_base_workload(d);
  run.stats = derive_shift_stats(d.tickets, d.calendar, d.locations);
  run.trouble =
      compute_trouble_workload(d.faults, d.repair_profiles, run.stats, d, TroubleOptions{config.travel_surcharge_hours});
  run.nbntt = compute_nbntt_workload(d.tasks, d);
  const auto streams = run.streams();
  run.coverage = run_coverage_pipeline(d, streams, config);
  run.time_allocation = time_allocation_report(run.coverage.ledger, d);
  run.utilization = utilization_report(streams, config.crew, d);
  if (d.payroll) run.stress = staffing_stress(run.coverage.allotment, *d.payroll);
  return run;
}

fs::path write_output(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
  return path;
}

namespace {

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

}  // namespace

std::vector<std::string> write_workload_outputs(const PipelineRun& run, const fs::path& dir) {
  write_output(dir, "base_workload.csv", render([&](std::ostream& o) { write_base_audit_csv(o, run.base); }));
  write_output(dir, "trouble.csv", render([&](std::ostream& o) { write_trouble_csv(o, run.trouble); }));
  write_output(dir, "shift_stats.csv", render([&](std::ostream& o) { write_shift_stats_csv(o, run.stats); }));
  write_output(dir, "nbntt.csv", render([&](std::ostream& o) { write_nbntt_csv(o, run.nbntt); }));
  return {"base_workload.csv", "trouble.csv", "shift_stats.csv", "nbntt.csv"};
}

std::vector<std::string> write_coverage_outputs(const PipelineRun& run, const fs::path& dir) {
  const Dataset& d = run.dataset;
  write_output(dir, "allotment.csv", render([&](std::ostream& o) { write_allotment_csv(o, run.coverage, d); }));
  write_output(dir, "allotment.txt", render([&](std::ostream& o) { write_allotment_text(o, run.coverage, d); }));
  write_output(dir, "positions.csv",
               render([&](std::ostream& o) { write_positions_csv(o, run.coverage.allotment, d); }));
  return {"allotment.csv", "allotment.txt", "positions.csv"};
}

std::vector<std::string> write_report_outputs(const PipelineRun& run, const fs::path& dir) {
  std::vector<std::string> names = write_workload_outputs(run, dir);
  for (auto& n : write_coverage_outputs(run, dir)) names.push_back(n);
  write_output(dir, "time_allocation.csv",
               render([&](std::ostream& o) { write_time_allocation_csv(o, run.time_allocation); }));
  write_output(dir, "time_allocation.txt",
               render([&](std::ostream& o) { write_time_allocation_text(o, run.time_allocation); }));
  write_output(dir, "utilization.csv", render([&](std::ostream& o) { write_utilization_csv(o, run.utilization); }));
  write_output(dir, "utilization.txt", render([&](std::ostream& o) { write_utilization_text(o, run.utilization); }));
  names.insert(names.end(), {"time_allocation.csv", "time_allocation.txt", "utilization.csv", "utilization.txt"});
  if (run.stress) {
    write_output(dir, "stress.csv", render([&](std::ostream& o) { write_stress_csv(o, *run.stress); }));
    write_output(dir, "stress.txt", render([&](std::ostream& o) { write_stress_text(o, *run.stress); }));
    names.insert(names.end(), {"stress.csv", "stress.txt"});
  }
  return names;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

void write_run_manifest(const fs::path& dir, const std::string& verb, const std::optional<fs::path>& manifest_path,
                        const std::optional<fs::path>& config_path, const std::vector<std::string>& outputs) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["tool"] = "sigman";
  doc["verb"] = verb;
  if (config_path) {
    doc["config"] = {{"file", config_path->filename().string()},
                     {"sha256", sha256_hex(csv::read_file(config_path->string()))}};
  } else {
    doc["config"] = {{"file", nullptr}, {"sha256", nullptr}};
  }
  ordered_json inputs = ordered_json::array();
  if (manifest_path) {
    inputs.push_back({{"file", manifest_path->filename().string()},
                      {"sha256", sha256_hex(csv::read_file(manifest_path->string()))}});
    const fs::path root = manifest_path->parent_path();
    for (const auto& member : Manifest::read(*manifest_path).members()) {
      inputs.push_back({{"file", member.lexically_relative(root).generic_string()},
                        {"sha256", sha256_hex(csv::read_file(member.string()))}});
    }
  }
  doc["inputs"] = inputs;
  ordered_json outs = ordered_json::array();
  for (const auto& name : outputs) {
    outs.push_back({{"file", name}, {"sha256", sha256_hex(csv::read_file((dir / name).string()))}});
  }
  doc["outputs"] = outs;
  write_output(dir, "run_manifest.json", doc.dump(2) + "\n");
}

}  // namespace sigman
