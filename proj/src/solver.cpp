#include "snowtree/solver.hpp"

namespace snowtree {

const char* to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::Greedy: return "greedy";
    case Algorithm::Approx: return "approx";
    case Algorithm::Exact: return "exact";
    case Algorithm::Direct: return "direct";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  for (auto a : {Algorithm::Greedy, Algorithm::Approx, Algorithm::Exact, Algorithm::Direct})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

bool SolverReport::same_result(const SolverReport& other) const {
  return algorithm == other.algorithm && assignment == other.assignment && metric == other.metric &&
         seed == other.seed && trace == other.trace && no_feasible == other.no_feasible;
}

SolverReport solve_direct(const SopInstance& inst) {
  const auto started = std::chrono::steady_clock::now();
  Assignment a;
  for (const auto& bs : inst.tree.stations) a.sets.push_back(bs.universe);
  SolverReport report;
  report.algorithm = Algorithm::Direct;
  report.runtime = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  report.assignment = check_feasibility(inst, std::move(a));
  report.metric = scalability_metric(report.assignment);
  return report;
}

SolverReport solve(const SopInstance& inst, Algorithm algo, std::uint64_t seed, ExactLimits limits) {
  switch (algo) {
    case Algorithm::Greedy: return solve_greedy(inst);
    case Algorithm::Approx: return solve_approx(inst, seed);
    case Algorithm::Exact: return solve_exact(inst, limits);
    case Algorithm::Direct: return solve_direct(inst);
  }
  throw ModelError("unknown algorithm");
}

}  // namespace snowtree
