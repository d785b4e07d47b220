#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>

#include "snowtree/solver.hpp"

namespace snowtree {

namespace {

using Mask = std::uint64_t;

struct PairCheck {
  StationId other;  // always < the station the check is attached to
  long long lower;
  long long upper;
  // (bit in this station, bit in other station) for each common subcarrier
  std::vector<std::pair<int, int>> common;
};

struct Candidate {
  Mask mask;
  int size;
};

struct Search {
  std::vector<std::vector<SubcarrierId>> elems;
  std::vector<std::vector<PairCheck>> checks;  // checks[s] against stations < s
  std::vector<std::vector<Candidate>> candidates;
  std::vector<int> rest_max;  // sum of |Z_k| for k > s
  std::vector<Mask> current;
  std::vector<Mask> best;
  long long best_metric = -1;
  bool first_match_only = false;  // second pass: stop at first assignment reaching best_metric

  bool consistent(std::size_t s, Mask m) const {
    for (const auto& c : checks[s]) {
      const Mask o = current[c.other];
      long long overlap = 0;
      for (auto [bs, bo] : c.common) overlap += ((m >> bs) & 1U) & ((o >> bo) & 1U);
      if (overlap < c.lower || overlap > c.upper) return false;
    }
    return true;
  }

  // Returns true when the search should stop.
  bool dfs(std::size_t s, long long metric) {
    if (s == elems.size()) {
      if (first_match_only) {
        if (metric == best_metric) {
          best = current;
          return true;
        }
        return false;
      }
      if (metric > best_metric) {
        best_metric = metric;
        best = current;
      }
      return false;
    }
    for (const auto& cand : candidates[s]) {
      const long long reach = metric + cand.size + rest_max[s];
      if (first_match_only ? reach < best_metric : reach <= best_metric) {
        if (!first_match_only) break;  // pass 1 candidates are sorted by size, descending
        continue;
      }
      if (!consistent(s, cand.mask)) continue;
      current[s] = cand.mask;
      if (dfs(s + 1, metric + cand.size)) return true;
    }
    return false;
  }
};

// All masks over `bits` positions with popcount >= min_size, in lexicographic
// order of their ascending element lists.
void lex_subsets(int bits, int min_size, int next, Mask prefix, int size, std::vector<Candidate>& out) {
  if (size >= min_size) out.push_back(Candidate{prefix, size});
  for (int b = next; b < bits; ++b) lex_subsets(bits, min_size, b + 1, prefix | (Mask{1} << b), size + 1, out);
}

}  // namespace

SolverReport solve_exact(const SopInstance& inst, ExactLimits limits) {
  const auto& t = inst.tree;
  const std::size_t n = t.size();
  if (n > limits.max_stations)
    throw InstanceTooLarge("exact solver refuses " + std::to_string(n) + " stations (cap " +
                           std::to_string(limits.max_stations) + ")");
  for (const auto& bs : t.stations)
    if (bs.universe.size() > limits.max_universe || bs.universe.size() > 30)
      throw InstanceTooLarge("exact solver refuses |Z_" + std::to_string(bs.id) + "| = " +
                             std::to_string(bs.universe.size()) + " (cap " +
                             std::to_string(std::min<std::size_t>(limits.max_universe, 30)) + ")");

  const auto started = std::chrono::steady_clock::now();
  Search search;
  search.elems.resize(n);
  search.checks.resize(n);
  search.candidates.resize(n);
  search.rest_max.assign(n, 0);
  search.current.assign(n, 0);
  for (StationId i = 0; i < n; ++i)
    search.elems[i].assign(t.stations[i].universe.begin(), t.stations[i].universe.end());
  for (std::size_t s = n; s-- > 1;)
    search.rest_max[s - 1] = search.rest_max[s] + static_cast<int>(search.elems[s].size());

  for (StationId s = 0; s < n; ++s) {
    for (StationId o : t.interferers[s]) {
      if (o >= s) continue;
      const bool tree_link = (t.parent[s] && *t.parent[s] == o) || (t.parent[o] && *t.parent[o] == s);
      PairCheck c{o, tree_link ? 1 : 0, t.phi_of(s, o).value_or(0), {}};
      const auto& es = search.elems[s];
      const auto& eo = search.elems[o];
      for (int a = 0; a < static_cast<int>(es.size()); ++a) {
        auto it = std::lower_bound(eo.begin(), eo.end(), es[a]);
        if (it != eo.end() && *it == es[a]) c.common.emplace_back(a, static_cast<int>(it - eo.begin()));
      }
      search.checks[s].push_back(std::move(c));
    }
    lex_subsets(static_cast<int>(search.elems[s].size()), std::max(0, t.stations[s].sigma), 0, 0, 0,
                search.candidates[s]);
  }

  // Pass 1: largest sets first to find the optimum value quickly.
  auto lex_order = search.candidates;
  for (auto& c : search.candidates)
    std::stable_sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.size > b.size; });
  search.dfs(0, 0);

  SolverReport report;
  report.algorithm = Algorithm::Exact;
  Assignment a;
  a.sets.resize(n);
  if (search.best_metric < 0) {
    report.no_feasible = true;
  } else {
    // Pass 2: lexicographic order, first assignment reaching the optimum.
    search.candidates = std::move(lex_order);
    search.first_match_only = true;
    search.dfs(0, 0);
    for (StationId i = 0; i < n; ++i)
      for (int b = 0; b < static_cast<int>(search.elems[i].size()); ++b)
        if ((search.best[i] >> b) & 1U) a.sets[i].insert(search.elems[i][b]);
  }
  report.runtime = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  report.assignment = check_feasibility(inst, std::move(a));
  report.metric = scalability_metric(report.assignment);
  return report;
}

}  // namespace snowtree
