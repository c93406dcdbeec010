#include "sbc/batch.hpp"

#include <charconv>

namespace sbc {

SeedRange parse_seed_range(const std::string& text) {
  auto parse = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw SbcError("malformed seed range '" + text + "' (expected N..M)");
    }
    return v;
  };
  auto dots = text.find("..");
  SeedRange r;
  if (dots == std::string::npos) {
    r.first = r.last = parse(text);
  } else {
    r.first = parse(std::string_view(text).substr(0, dots));
    r.last = parse(std::string_view(text).substr(dots + 2));
  }
  if (r.last < r.first) throw SbcError("empty seed range '" + text + "'");
  return r;
}

namespace {

RunSummary run_one(const Model& model, const SimState& start, const Scenario* scenario, std::uint64_t seed,
                   std::size_t max_steps, const SimOptions& options) {
  RunSummary r;
  r.seed = seed;
  try {
    Trace t = simulate_from(start, model, scenario, seed, max_steps, options);
    r.status = t.status;
    r.fired.reserve(t.steps.size());
    for (const auto& s : t.steps) r.fired.push_back(s.prefix.interaction);
    r.final_env = std::move(t.final_env);
    r.final_node = std::move(t.final_node);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<RunSummary> simulate_batch(const Model& model, const std::string& constant, const Scenario* scenario,
                                       SeedRange seeds, std::size_t max_steps, const SimOptions& options) {
  const SimState start = start_state(model, constant);
  const auto n = static_cast<std::int64_t>(seeds.count());
  std::vector<RunSummary> out(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        run_one(model, start, scenario, seeds.first + static_cast<std::uint64_t>(i), max_steps, options);
  }
  return out;
}

std::vector<RunSummary> simulate_batch_serial(const Model& model, const std::string& constant,
                                              const Scenario* scenario, SeedRange seeds, std::size_t max_steps,
                                              const SimOptions& options) {
  const SimState start = start_state(model, constant);
  std::vector<RunSummary> out;
  out.reserve(seeds.count());
  for (std::uint64_t s = seeds.first;; ++s) {
    out.push_back(run_one(model, start, scenario, s, max_steps, options));
    if (s == seeds.last) break;
  }
  return out;
}

std::string format_summary(const RunSummary& r) {
  std::string out = "seed " + std::to_string(r.seed) + ": ";
  if (r.error) return out + "error: " + *r.error;
  out += std::string(to_string(r.status)) + " at " + r.final_node + " after " + std::to_string(r.fired.size()) +
         (r.fired.size() == 1 ? " firing" : " firings") + " | env: " + to_string(r.final_env);
  return out;
}

}  // namespace sbc
