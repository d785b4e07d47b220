#include <chrono>

#include "snowtree/solver.hpp"

namespace snowtree {

SolverReport solve_greedy(const SopInstance& inst) {
  const auto started = std::chrono::steady_clock::now();
  const auto& t = inst.tree;
  const std::size_t n = t.size();

  std::vector<SubcarrierSet> x(n);
  for (StationId i = 0; i < n; ++i) x[i] = t.stations[i].universe;

  for (StationId i = 0; i < n; ++i) {
    const long long sigma_i = t.stations[i].sigma;
    for (StationId j : t.interferers[i]) {
      const long long sigma_j = t.stations[j].sigma;
      const long long phi = t.phi_of(i, j).value_or(0);
      const SubcarrierSet common = intersection(t.stations[i].universe, t.stations[j].universe);
      auto overlap = static_cast<long long>(intersection_size(x[i], x[j]));

      for (const SubcarrierId s : common) {
        if (overlap <= phi) break;
        // Only a subcarrier both stations still hold reduces the overlap.
        if (!x[i].count(s) || !x[j].count(s)) continue;
        const auto size_i = static_cast<long long>(x[i].size());
        const auto size_j = static_cast<long long>(x[j].size());
        if (size_i >= size_j && size_i > sigma_i) {
          x[i].erase(s);
          --overlap;
        } else if (size_j > sigma_j) {
          x[j].erase(s);
          --overlap;
        }
        // else: neither side may shrink; the pair stays over its bound.
      }
    }
  }

  // Every tree link needs at least one shared subcarrier to carry BS-BS traffic.
  for (StationId i = 1; i < n; ++i) {
    if (!t.parent[i]) continue;
    const StationId p = *t.parent[i];
    if (intersection_size(x[i], x[p]) > 0) continue;
    const SubcarrierSet common = intersection(t.stations[i].universe, t.stations[p].universe);
    if (common.empty()) continue;
    x[i].insert(*common.begin());
    x[p].insert(*common.begin());
  }

  SolverReport report;
  report.algorithm = Algorithm::Greedy;
  report.runtime = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  Assignment a;
  a.sets = std::move(x);
  report.assignment = check_feasibility(inst, std::move(a));
  report.metric = scalability_metric(report.assignment);
  return report;
}

}  // namespace snowtree
