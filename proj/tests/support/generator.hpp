#pragma once

// Seeded random datasets and configs for property and oracle tests.

#include <cstdint>

#include "sigman/config.hpp"
#include "sigman/domain.hpp"

namespace sigman::testing {

struct GenOptions {
  int max_bases = 10;
  int min_locations = 1;
  int max_locations = 30;
  int max_schedule = 50;
  int max_tickets = 100;
  int max_tasks = 6;
};

// Base "B0" is staffed on every slot and adjacent to every other base, so
// off-hours trouble always has somewhere to go.
Dataset random_dataset(std::uint64_t seed, const GenOptions& options = {});

EngineConfig random_config(std::uint64_t seed, const Dataset& ds);

}  // namespace sigman::testing
