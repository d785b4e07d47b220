#include <numeric>
#include <queue>
#include <sstream>

#include "snowtree/solver.hpp"

namespace snowtree {

void SatFormula::validate() const {
  if (num_vars < 0) throw ModelError("negative variable count");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    if (clauses[c].empty()) throw ModelError("clause " + std::to_string(c) + " is empty");
    for (int lit : clauses[c])
      if (lit == 0 || std::abs(lit) > num_vars)
        throw ModelError("clause " + std::to_string(c) + " has literal " + std::to_string(lit) +
                         " outside 1.." + std::to_string(num_vars));
  }
}

bool SatFormula::satisfied_by(const std::vector<bool>& values) const {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (int lit : clause)
      if (values.at(static_cast<std::size_t>(std::abs(lit))) == (lit > 0)) { sat = true; break; }
    if (!sat) return false;
  }
  return true;
}

SopInstance reduce_sat_to_sop(const SatFormula& f) {
  f.validate();
  const std::size_t n = f.clauses.size();
  if (n == 0) throw ModelError("formula has no clauses");

  SnowTreeBuilder b;
  for (std::size_t c = 0; c < n; ++c) {
    SubcarrierSet z;
    for (int lit : f.clauses[c]) z.insert(SubcarrierId{static_cast<std::uint32_t>(std::abs(lit))});
    b.add_station("C" + std::to_string(c), std::move(z), 1);
  }
  const SopInstance draft = b.build_unchecked();
  const auto& st = draft.tree.stations;

  // Kruskal-style pass in ascending (i, j) order: an edge closing a loop is skipped.
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](std::size_t v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  std::vector<std::vector<StationId>> adj(n);
  for (StationId i = 0; i < n; ++i)
    for (StationId j = i + 1; j < n; ++j) {
      const auto shared = static_cast<int>(intersection_size(st[i].universe, st[j].universe));
      if (shared == 0) continue;
      b.interfere(i, j, shared);
      const auto ri = find(i);
      const auto rj = find(j);
      if (ri == rj) continue;
      comp[ri] = rj;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }

  std::vector<bool> seen(n, false);
  std::queue<StationId> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  SnowTreeBuilder linked = b;
  while (!q.empty()) {
    const StationId u = q.front();
    q.pop();
    for (StationId v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      ++reached;
      const auto shared = static_cast<int>(intersection_size(st[u].universe, st[v].universe));
      linked.link(v, u, shared);
      q.push(v);
    }
  }
  if (reached != n) throw ModelError("clause graph is disconnected; no spanning SNOW-tree exists");
  return linked.build();
}

SatFormula parse_dimacs(const std::string& text) {
  SatFormula f;
  std::istringstream in(text);
  std::string line;
  std::vector<int> clause;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c') continue;
    if (first == "%") break;
    if (first == "p") {
      std::string fmt;
      int clauses = 0;
      if (!(ls >> fmt >> f.num_vars >> clauses) || fmt != "cnf")
        throw ModelError("line " + std::to_string(line_no) + ": malformed DIMACS header");
      header = true;
      continue;
    }
    if (!header) throw ModelError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");
    std::istringstream cs(line);
    std::string tok;
    while (cs >> tok) {
      int lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ModelError("line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (lit == 0) {
        f.clauses.push_back(clause);
        clause.clear();
      } else {
        clause.push_back(lit);
      }
    }
  }
  if (!clause.empty()) f.clauses.push_back(clause);
  if (!header) throw ModelError("missing 'p cnf' header");
  f.validate();
  return f;
}

}  // namespace snowtree
