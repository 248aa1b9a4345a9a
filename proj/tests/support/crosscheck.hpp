#pragma once

// Engine-versus-oracle comparison and conservation checks shared by the
// property tests and the acceptance binary. Each returns a list of
// human-readable mismatches; empty means agreement.

#include <cstdint>
#include <string>
#include <vector>

#include "sigman/engine.hpp"

namespace sigman::testing {

std::vector<std::string> crosscheck(const Dataset& ds, const EngineConfig& config);
std::vector<std::string> crosscheck_seed(std::uint64_t seed);

// Hours that must balance inside one run: time-allocation buckets against paid
// hours, hosted demand against raw demand, utilization against the streams,
// and (without a travel surcharge) trouble hours against the fault burden.
std::vector<std::string> conservation(const PipelineRun& run, const EngineConfig& config);

std::vector<std::string> time_allocation_conservation(const TimeAllocationReport& report);

}  // namespace sigman::testing
