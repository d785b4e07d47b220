// snowtree: solve, verify and simulate SNOW-tree subcarrier assignments.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "snowtree/io.hpp"
#include "snowtree/rng.hpp"
#include "snowtree/simulator.hpp"
#include "snowtree/solver.hpp"

namespace fs = std::filesystem;
using namespace snowtree;

namespace {

enum Exit { kOk = 0, kBadInput = 1, kInfeasible = 2, kRefused = 3 };

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Algorithm parse_algo(const std::string& name) {
  const auto a = algorithm_from_string(name);
  if (!a) throw IoError("unknown algorithm '" + name + "' (greedy, approx, exact, direct)");
  return *a;
}

int cmd_solve(const fs::path& inst_path, const std::string& algo_name, std::uint64_t seed, fs::path out,
              ExactLimits limits) {
  const Algorithm algo = parse_algo(algo_name);
  const SopInstance inst = load_instance(inst_path);
  if (out.empty()) out = inst_path.stem().string() + "." + algo_name + ".report";
  SolverReport r;
  try {
    r = solve(inst, algo, seed, limits);
  } catch (const InstanceTooLarge& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  }
  save_report(r, out);
  std::cerr << to_string(algo) << ": metric " << r.metric << ", "
            << (r.no_feasible ? "no feasible assignment exists" : r.assignment.feasible ? "feasible" : "infeasible")
            << ", " << r.runtime.count() << " us -> " << out.string() << "\n";
  return r.assignment.feasible ? kOk : kInfeasible;
}

int cmd_verify(const fs::path& inst_path, const fs::path& asg_path) {
  const SopInstance inst = load_instance(inst_path);
  const Assignment a = check_feasibility(inst, load_assignment(asg_path, inst.tree.size()));
  std::cout << (a.feasible ? "feasible" : "infeasible") << " metric " << scalability_metric(a) << "\n";
  std::cout << format_violations(a.violations);
  return a.feasible ? kOk : kInfeasible;
}

int cmd_gensat(const fs::path& cnf, fs::path out) {
  const SatFormula f = parse_dimacs(read_file(cnf));
  const SopInstance inst = reduce_sat_to_sop(f);
  if (out.empty()) out = cnf.stem().string() + ".inst";
  save_instance(inst, out);
  std::cerr << f.clauses.size() << " clauses, " << f.num_vars << " variables -> " << out.string() << "\n";
  return kOk;
}

std::string summary_text(const Scenario& sc, const SolverReport& r, const SimLog& log, const RunMetrics& m,
                         std::uint64_t seed) {
  std::ostringstream out;
  out << "[summary]\n";
  out << "algorithm = " << (sc.algorithm ? to_string(r.algorithm) : "explicit") << "\n";
  out << "seed = " << seed << "\n";
  out << "metric = " << r.metric << "\n";
  out << "feasible = " << (r.assignment.feasible ? "true" : "false") << "\n";
  out << "end_us = " << log.end_us << "\n";
  out << "horizon_exhausted = " << (log.horizon_exhausted ? "true" : "false") << "\n";
  out << "packets = " << log.packets.size() << "\n";
  out << "undelivered = " << m.undelivered << "\n";
  out << "prr = " << format_fixed(m.global().prr) << "\n";
  out << "latency_mean_ms = " << format_fixed(m.global().latency_mean_ms) << "\n";
  out << "energy_per_node_mj = " << format_fixed(m.global().energy_per_node_mj) << "\n";
  out << "link_collisions = " << log.link_collisions << "\n";
  out << "cca_busy = " << log.cca_busy << "\n";
  out << "dropped_uplink = " << log.dropped_uplink << "\n";
  out << "dropped_link = " << log.dropped_link << "\n";
  out << "dropped_downlink = " << log.dropped_downlink << "\n";
  out << "digest = " << hex64(log.digest) << "\n";
  return out.str();
}

int cmd_simulate(const fs::path& scenario, const fs::path& out, std::optional<std::uint64_t> seed_flag,
                 const std::string& algo_flag) {
  Scenario sc = load_scenario(scenario);
  if (!algo_flag.empty()) sc.algorithm = parse_algo(algo_flag);
  const std::uint64_t seed = seed_flag.value_or(sc.seed);
  const SolverReport r = scenario_assignment(sc, std::nullopt, seed);
  const Network net = build_network(sc.instance, r.assignment, sc.nodes_per_snow);
  std::cerr << "simulating " << sc.workload.flows.size() << " flows on " << net.snow_count() << " SNOWs\n";
  const SimLog log = simulate(net, sc.sim, sc.workload, Rng::derive_seed(seed, 1));
  const RunMetrics m = compute_metrics(log, sc.sim.energy);

  save_report(r, out / "assignment.report");
  write_file(out / "flows.csv", flows_csv(m));
  write_file(out / "nodes.csv", nodes_csv(m));
  write_file(out / "groups.csv", groups_csv(m));
  write_file(out / "summary.txt", summary_text(sc, r, log, m, seed));
  if (sc.sim.record_trace) {
    std::ostringstream t;
    t << "time_us,kind,a,b\n";
    for (const auto& e : log.trace) t << e.time << "," << e.kind << "," << e.a << "," << e.b << "\n";
    write_file(out / "trace.csv", t.str());
  }
  std::cerr << "prr " << format_fixed(m.global().prr, 4) << ", latency " << format_fixed(m.global().latency_mean_ms, 2)
            << " ms, energy/node " << format_fixed(m.global().energy_per_node_mj, 3) << " mJ -> " << out.string()
            << "\n";
  return kOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sweep(const fs::path& scenario, std::optional<int> seeds_flag, const std::string& algos, const fs::path& out) {
  const Scenario sc = load_scenario(scenario);
  const int seeds = seeds_flag.value_or(sc.seeds);
  if (seeds < 1) throw IoError("--seeds must be at least 1");
  std::vector<Algorithm> list;
  for (const auto& name : split_list(algos)) list.push_back(parse_algo(name));
  if (list.empty()) throw IoError("--algos is empty");

  struct Acc {
    int runs = 0;
    int built = 0;  // runs whose assignment could host the network
    double metric = 0, feasible = 0, prr = 0, latency = 0, energy = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  std::ostringstream runs;
  runs << "algorithm,seed_index,seed,metric,feasible,group,offered,delivered,prr,latency_mean_ms,energy_per_node_mj\n";
  for (const Algorithm algo : list) {
    for (int k = 0; k < seeds; ++k) {
      const std::uint64_t seed = Rng::derive_seed(sc.seed, static_cast<std::uint64_t>(k));
      const SolverReport r = scenario_assignment(sc, algo, seed);
      const std::string prefix = std::string(to_string(algo)) + "," + std::to_string(k) + "," + std::to_string(seed) +
                                 "," + std::to_string(r.metric) + "," + (r.assignment.feasible ? "1" : "0") + ",";
      std::optional<Network> net;
      try {
        net = build_network(sc.instance, r.assignment, sc.nodes_per_snow);
      } catch (const SimError& e) {
        // Nothing can be delivered on this assignment.
        std::cerr << to_string(algo) << " run " << k + 1 << "/" << seeds << ": unusable assignment: " << e.what()
                  << "\n";
        auto& a = acc[{to_string(algo), "global"}];
        ++a.runs;
        a.metric += static_cast<double>(r.metric);
        a.feasible += r.assignment.feasible ? 1.0 : 0.0;
        runs << prefix << "global,0,0," << format_fixed(0.0) << ",,\n";
        continue;
      }
      const RunMetrics m = run(*net, sc.sim, sc.workload, Rng::derive_seed(seed, 1));
      std::cerr << to_string(algo) << " run " << k + 1 << "/" << seeds << ": prr " << format_fixed(m.global().prr, 4)
                << "\n";
      for (const auto& g : m.groups) {
        if (g.group.rfind("snow:", 0) == 0) continue;
        auto& a = acc[{to_string(algo), g.group}];
        ++a.runs;
        ++a.built;
        a.metric += static_cast<double>(r.metric);
        a.feasible += r.assignment.feasible ? 1.0 : 0.0;
        a.prr += g.prr;
        a.latency += g.latency_mean_ms;
        a.energy += g.energy_per_node_mj;
        runs << prefix << g.group << "," << g.offered << "," << g.delivered << "," << format_fixed(g.prr) << ","
             << format_fixed(g.latency_mean_ms) << "," << format_fixed(g.energy_per_node_mj) << "\n";
      }
    }
  }
  std::vector<ComparisonRow> rows;
  for (const auto& [key, a] : acc) {
    const double n = a.runs;
    const double built = std::max(1, a.built);
    rows.push_back(ComparisonRow{key.first, key.second, a.runs, a.metric / n, a.feasible / n, a.prr / n,
                                 a.latency / built, a.energy / built});
  }
  write_file(out / "comparison.csv", comparison_csv(rows));
  write_file(out / "runs.csv", runs.str());
  std::cerr << "wrote " << (out / "comparison.csv").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SNOW-tree subcarrier assignment and network simulation"};
  app.require_subcommand(1);

  fs::path inst_path, out_path, asg_path, scenario_path, cnf_path;
  std::string algo = "greedy";
  std::uint64_t seed = 1;
  std::size_t max_stations = ExactLimits{}.max_stations;
  std::size_t max_universe = ExactLimits{}.max_universe;

  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write a report");
  solve_cmd->add_option("instance", inst_path, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--algo", algo, "greedy, approx, exact or direct");
  solve_cmd->add_option("--seed", seed, "Seed for approx");
  solve_cmd->add_option("--out", out_path, "Report path (default <instance>.<algo>.report)");
  solve_cmd->add_option("--max-stations", max_stations, "Exact solver station cap");
  solve_cmd->add_option("--max-universe", max_universe, "Exact solver universe cap");

  auto* verify_cmd = app.add_subcommand("verify", "Check an explicit assignment");
  verify_cmd->add_option("instance", inst_path, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("assignment", asg_path, "File with an [assignment] section")
      ->required()
      ->check(CLI::ExistingFile);

  auto* gensat_cmd = app.add_subcommand("gensat", "Reduce a DIMACS CNF formula to an instance");
  gensat_cmd->add_option("dimacs", cnf_path, "CNF file")->required()->check(CLI::ExistingFile);
  gensat_cmd->add_option("--out", out_path, "Instance path (default <dimacs>.inst)");

  std::optional<std::uint64_t> sim_seed;
  std::string sim_algo;
  fs::path sim_out = "sim-out";
  auto* sim_cmd = app.add_subcommand("simulate", "Run one scenario");
  sim_cmd->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim_out, "Output directory");
  sim_cmd->add_option("--seed", sim_seed, "Override the scenario seed");
  sim_cmd->add_option("--algo", sim_algo, "Override the scenario algorithm");

  std::optional<int> sweep_seeds;
  std::string sweep_algos = "greedy,approx,direct";
  fs::path sweep_out = "sweep-out";
  auto* sweep_cmd = app.add_subcommand("sweep", "Compare algorithms over several seeds");
  sweep_cmd->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--seeds", sweep_seeds, "Runs per algorithm (default from the scenario)");
  sweep_cmd->add_option("--algos", sweep_algos, "Comma-separated algorithms");
  sweep_cmd->add_option("--out", sweep_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(inst_path, algo, seed, out_path, ExactLimits{max_stations, max_universe});
    if (*verify_cmd) return cmd_verify(inst_path, asg_path);
    if (*gensat_cmd) return cmd_gensat(cnf_path, out_path);
    if (*sim_cmd) return cmd_simulate(scenario_path, sim_out, sim_seed, sim_algo);
    if (*sweep_cmd) return cmd_sweep(scenario_path, sweep_seeds, sweep_algos, sweep_out);
  } catch (const InstanceTooLarge& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
