#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbc/sim.hpp"

namespace sbc {

// Outcome of one seeded run, without the per-step detail of a Trace.
struct RunSummary {
  std::uint64_t seed = 0;
  TerminalStatus status = TerminalStatus::Deadlock;
  std::vector<std::string> fired;  // interaction ids in firing order
  Env final_env;
  std::string final_node;
  std::optional<std::string> error;  // set when the run aborted

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive

  std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};

// Parses "N..M" (or a single "N").
SeedRange parse_seed_range(const std::string& text);

// One independent run per seed, in parallel with OpenMP. Results are in
// seed order and identical to simulate_batch_serial.
std::vector<RunSummary> simulate_batch(const Model& model, const std::string& constant, const Scenario* scenario,
                                       SeedRange seeds, std::size_t max_steps, const SimOptions& options = {});

// Single-threaded reference for simulate_batch.
std::vector<RunSummary> simulate_batch_serial(const Model& model, const std::string& constant,
                                              const Scenario* scenario, SeedRange seeds, std::size_t max_steps,
                                              const SimOptions& options = {});

std::string format_summary(const RunSummary& r);

}  // namespace sbc
