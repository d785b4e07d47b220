#include <chrono>
#include <map>

#include "snowtree/rng.hpp"
#include "snowtree/solver.hpp"

namespace snowtree {

SolverReport solve_approx(const SopInstance& inst, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  const auto& t = inst.tree;
  const std::size_t n = t.size();
  Rng rng(seed);

  // Z = union of all universes, each subcarrier with the stations holding it.
  std::map<SubcarrierId, std::vector<StationId>> holders;
  for (StationId i = 0; i < n; ++i)
    for (const SubcarrierId s : t.stations[i].universe) holders[s].push_back(i);

  ApproxTrace trace;
  trace.step1_sets.resize(n);
  trace.step2_sets.resize(n);

  // Coins are drawn in ascending (subcarrier, station) order.
  for (const auto& [s, stations] : holders)
    for (const StationId i : stations)
      if (rng.coin()) trace.step1_sets[i].insert(trace.step1_sets[i].end(), s);

  for (StationId i = 0; i < n; ++i)
    if (static_cast<long long>(trace.step1_sets[i].size()) < t.stations[i].sigma) trace.step2_ran = true;

  if (trace.step2_ran) {
    for (const auto& [s, stations] : holders)
      for (const StationId i : stations) {
        if (trace.step1_sets[i].count(s)) continue;
        if (rng.coin()) trace.step2_sets[i].insert(trace.step2_sets[i].end(), s);
      }
  }

  Assignment a;
  a.sets.resize(n);
  for (StationId i = 0; i < n; ++i) {
    a.sets[i] = trace.step1_sets[i];
    a.sets[i].insert(trace.step2_sets[i].begin(), trace.step2_sets[i].end());
  }

  SolverReport report;
  report.algorithm = Algorithm::Approx;
  report.runtime = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  report.seed = seed;
  report.trace = std::move(trace);
  report.assignment = check_feasibility(inst, std::move(a));
  report.metric = scalability_metric(report.assignment);
  return report;
}

}  // namespace snowtree
