#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowtree/model.hpp"

namespace snowtree {

enum class Algorithm { Greedy, Approx, Exact, Direct };

const char* to_string(Algorithm algo);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

/// Sets chosen by each step of the randomized solver.
struct ApproxTrace {
  std::vector<SubcarrierSet> step1_sets;  // X'_i
  bool step2_ran = false;
  std::vector<SubcarrierSet> step2_sets;  // X''_i, disjoint from X'_i

  bool operator==(const ApproxTrace&) const = default;
};

struct SolverReport {
  Algorithm algorithm = Algorithm::Greedy;
  Assignment assignment;
  std::size_t metric = 0;
  std::chrono::microseconds runtime{0};  // solver only, excludes the feasibility check
  std::optional<std::uint64_t> seed;     // approx only
  std::optional<ApproxTrace> trace;      // approx only
  bool no_feasible = false;              // exact: search space has no feasible point

  /// Equality ignoring runtime.
  bool same_result(const SolverReport& other) const;
};

class InstanceTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExactLimits {
  std::size_t max_stations = 4;
  std::size_t max_universe = 10;
};

/// Fills `feasible` and `violations` of `a` against all three constraint
/// families. Runs in time linear in the assigned subcarriers per checked pair.
Assignment check_feasibility(const SopInstance& inst, Assignment a);

/// Baseline: every station keeps its whole universe.
SolverReport solve_direct(const SopInstance& inst);

/// Deterministic removal heuristic; result may be infeasible.
SolverReport solve_greedy(const SopInstance& inst);

/// Two-step randomized assignment with a 1/2 coin per (subcarrier, station).
SolverReport solve_approx(const SopInstance& inst, std::uint64_t seed);

/// Exhaustive search; throws InstanceTooLarge past the limits.
SolverReport solve_exact(const SopInstance& inst, ExactLimits limits = {});

SolverReport solve(const SopInstance& inst, Algorithm algo, std::uint64_t seed = 0,
                   ExactLimits limits = {});

// ---------------------------------------------------------------------------
// SAT -> SOP instance generator

/// CNF formula with DIMACS conventions: variables are 1..num_vars and a
/// literal is +v or -v.
struct SatFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  /// Throws ModelError on empty clauses or out-of-range literals.
  void validate() const;
  bool satisfied_by(const std::vector<bool>& values) const;  // values[v], v in 1..num_vars
};

/// One station per clause, one subcarrier per variable (x_v has index v).
/// Stations interfere when their clauses share a variable; phi is the number
/// of shared variables, sigma is 1. Tree edges are taken in ascending
/// (i, j) order, skipping any edge that would close a loop, then rooted at
/// station 0. Throws ModelError if the clause graph is disconnected.
SopInstance reduce_sat_to_sop(const SatFormula& f);

/// Parses DIMACS CNF text ("p cnf V C" header, clauses terminated by 0).
SatFormula parse_dimacs(const std::string& text);

}  // namespace snowtree
