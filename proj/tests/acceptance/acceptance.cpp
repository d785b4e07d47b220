// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [--only N] [--data DIR]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "instances.hpp"
#include "oracles.hpp"
#include "snowtree/io.hpp"
#include "snowtree/rng.hpp"
#include "snowtree/simulator.hpp"
#include "snowtree/solver.hpp"

namespace fs = std::filesystem;
using namespace snowtree;
using Clock = std::chrono::steady_clock;

namespace {

fs::path g_data = SNOWTREE_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

SubcarrierSet window(std::uint32_t lo, std::uint32_t len) {
  SubcarrierSet s;
  for (std::uint32_t k = lo; k < lo + len; ++k) s.insert(SubcarrierId{k});
  return s;
}

// Every simulation log produced in this process, for the invariant check.
std::vector<std::pair<std::string, SimLog>>& sim_logs() {
  static std::vector<std::pair<std::string, SimLog>> logs;
  return logs;
}

SimLog simulate_logged(const std::string& label, const Network& net, const SimConfig& cfg, const Workload& wl,
                       std::uint64_t seed) {
  SimLog log = simulate(net, cfg, wl, seed);
  sim_logs().emplace_back(label, log);
  return log;
}

// ---------------------------------------------------------------------------

Outcome subcarrier_formula() {
  const long long one = static_cast<long long>(derive_universe({{470000, 6000}}, SubcarrierParams{400, 0.5}).size());
  Rng rng(101);
  int agree = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    // alpha = num / 1000 keeps the reference in exact integer arithmetic.
    const long long w = rng.uniform_int(1, 60000);
    const long long omega = rng.uniform_int(50, 2000);
    const long long num = rng.uniform_int(1, 500);
    long long ref = (w * 1000) / (omega * num) - 1;
    if (ref < 0) ref = 0;
    const SubcarrierParams p{static_cast<double>(omega), static_cast<double>(num) / 1000.0};
    const auto got = static_cast<long long>(derive_universe({{0.0, static_cast<double>(w)}}, p).size());
    agree += got == ref;
  }
  return {one == 29 && agree == trials,
          "6000 kHz -> " + std::to_string(one) + " subcarriers; " + std::to_string(agree) + "/" +
              std::to_string(trials) + " random triples agree"};
}

Outcome greedy_trace() {
  const auto inst = load_instance(g_data / "t2.inst");
  const auto r = solve_greedy(inst);
  const SubcarrierSet x0{SubcarrierId{2}, SubcarrierId{4}};
  const SubcarrierSet x1{SubcarrierId{1}, SubcarrierId{3}, SubcarrierId{4}};
  const bool pass = r.assignment.sets[0] == x0 && r.assignment.sets[1] == x1 && r.metric == 5 && r.assignment.feasible;
  std::ostringstream d;
  d << "X_0 = {";
  for (auto s : r.assignment.sets[0]) d << " x" << s.index;
  d << " }, X_1 = {";
  for (auto s : r.assignment.sets[1]) d << " x" << s.index;
  d << " }, metric " << r.metric << (r.assignment.feasible ? ", feasible" : ", infeasible");
  return {pass, d.str()};
}

Outcome greedy_vs_opt() {
  Rng rng(202);
  int instances = 0, compared = 0, within = 0, oracle_checked = 0, oracle_agree = 0, consistent = 0, inconsistent = 0;
  double ratio_sum = 0;
  while (instances < 200) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto inst = testing::random_instance(rng, n, 8);
    if (!validate_instance(inst).empty()) continue;
    ++instances;
    const auto g = solve_greedy(inst);
    const auto e = solve_exact(inst);
    std::size_t total_z = 0;
    for (const auto& s : inst.tree.stations) total_z += s.universe.size();
    if (total_z <= 16) {
      ++oracle_checked;
      const long long ref = oracle::brute_force_opt(inst);
      oracle_agree += ref < 0 ? e.no_feasible : (!e.no_feasible && static_cast<long long>(e.metric) == ref);
    }
    if (e.no_feasible) {
      // No feasible point exists, so greedy cannot have found one.
      (g.assignment.feasible ? inconsistent : consistent) += 1;
      continue;
    }
    if (!g.assignment.feasible) continue;
    ++compared;
    within += g.metric <= e.metric;
    ratio_sum += e.metric == 0 ? 1.0 : static_cast<double>(g.metric) / static_cast<double>(e.metric);
  }
  const bool pass = compared > 0 && within == compared && inconsistent == 0 && oracle_agree == oracle_checked;
  return {pass, std::to_string(within) + "/" + std::to_string(compared) +
                    " greedy-feasible instances with greedy <= OPT, mean greedy/OPT " +
                    fmt(ratio_sum / std::max(1, compared)) + "; " + std::to_string(consistent) +
                    " no-feasible instances (greedy feasible on " + std::to_string(inconsistent) + "); exact agrees with brute force on " +
                    std::to_string(oracle_agree) + "/" + std::to_string(oracle_checked)};
}

// Five stations, Z_i = [10i, 10i + 60), interferers |i - j| <= 2,
// phi = ceil(0.5 |Z_i ∩ Z_j|).
SopInstance chain5(int sigma) {
  SnowTreeBuilder b;
  for (std::uint32_t i = 0; i < 5; ++i) b.add_station("C" + std::to_string(i), window(10 * i, 60), sigma);
  auto phi = [](StationId i, StationId j) {
    const int common = 60 - 10 * static_cast<int>(j - i);
    return (common + 1) / 2;
  };
  for (StationId i = 1; i < 5; ++i) b.link(i, i - 1, phi(i - 1, i));
  for (StationId i = 0; i + 2 < 5; ++i) b.interfere(i, i + 2, phi(i, i + 2));
  return b.build();
}

Outcome approx_ratio() {
  const auto off = chain5(0);
  const auto on = chain5(60);
  double total_z = 0;
  for (const auto& s : off.tree.stations) total_z += static_cast<double>(s.universe.size());
  double sum_off = 0, sum_on = 0;
  int step2_off = 0, step2_on = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const auto a = solve_approx(off, static_cast<std::uint64_t>(s));
    const auto b = solve_approx(on, static_cast<std::uint64_t>(s));
    sum_off += static_cast<double>(a.metric) / total_z;
    sum_on += static_cast<double>(b.metric) / total_z;
    step2_off += a.trace->step2_ran;
    step2_on += b.trace->step2_ran;
  }
  const double m_off = sum_off / seeds;
  const double m_on = sum_on / seeds;
  const bool pass = std::abs(m_off - 0.5) <= 0.02 && std::abs(m_on - 0.75) <= 0.02 && step2_off == 0 &&
                    step2_on == seeds;
  return {pass, "step 2 off: " + fmt(m_off) + " (target 0.50 +- 0.02); step 2 forced: " + fmt(m_on) +
                    " (target 0.75 +- 0.02)"};
}

Outcome pair_overlap() {
  const auto inst = chain5(60);
  const auto& t = inst.tree;
  double sum = 0;
  long samples = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const auto r = solve_approx(inst, static_cast<std::uint64_t>(s));
    for (StationId i = 0; i < t.size(); ++i)
      for (StationId j : t.interferers[i]) {
        if (j <= i) continue;
        sum += static_cast<double>(intersection_size(r.assignment.sets[i], r.assignment.sets[j])) /
               static_cast<double>(intersection_size(t.stations[i].universe, t.stations[j].universe));
        ++samples;
      }
  }
  const double mean = sum / static_cast<double>(samples);
  const double target = 7.0 / 16.0;
  return {std::abs(mean - target) <= 0.02, "mean |X_i ∩ X_j| / |Z_i ∩ Z_j| = " + fmt(mean) + " (target 7/16 = " +
                                               fmt(target) + " +- 0.02; two independent 3/4 draws give 9/16 = " +
                                               fmt(9.0 / 16.0) + ")"};
}

// Random trees of 5..8 stations on heavily overlapping windows, with
// phi >= ceil(0.5 |Z_i ∩ Z_j|) and sigma <= floor(0.5 |Z_i|) - 2 sqrt(|Z_i|).
Outcome feasibility_probability() {
  Rng rng(606);
  std::vector<SopInstance> family;
  while (family.size() < 10) {
    SnowTreeBuilder b;
    const auto n = static_cast<std::size_t>(rng.uniform_int(5, 8));
    std::vector<SubcarrierSet> z;
    for (std::size_t i = 0; i < n; ++i) {
      const auto len = static_cast<std::uint32_t>(rng.uniform_int(40, 80));
      z.push_back(window(static_cast<std::uint32_t>(rng.uniform_int(0, 20)), len));
      const double bound = std::floor(0.5 * len) - 2.0 * std::sqrt(static_cast<double>(len));
      b.add_station("G" + std::to_string(i), z.back(), static_cast<int>(rng.uniform_int(0, static_cast<long>(bound))));
    }
    auto phi = [&](std::size_t i, std::size_t j) {
      return static_cast<int>((intersection_size(z[i], z[j]) + 1) / 2);
    };
    std::vector<std::optional<StationId>> parent(n);
    for (StationId i = 1; i < n; ++i) {
      parent[i] = static_cast<StationId>(rng.uniform_int(0, i - 1));
      b.link(i, *parent[i], phi(i, *parent[i]));
    }
    for (StationId i = 0; i < n; ++i)
      for (StationId j = i + 1; j < n; ++j)
        if (parent[j] != i && parent[i] != j && rng.bernoulli(0.4)) b.interfere(i, j, phi(i, j));
    auto inst = b.build_unchecked();
    if (validate_instance(inst).empty()) family.push_back(std::move(inst));
  }
  int feasible = 0;
  const int runs = 1000;
  for (int s = 0; s < runs; ++s)
    feasible += solve_approx(family[static_cast<std::size_t>(s) % family.size()], static_cast<std::uint64_t>(s))
                    .assignment.feasible;
  const double frac = static_cast<double>(feasible) / runs;
  return {frac >= 0.99, std::to_string(feasible) + "/" + std::to_string(runs) + " approx runs feasible (" +
                            fmt(100 * frac, 1) + "%, threshold 99%) over 10 instances"};
}

bool satisfiable(const SatFormula& f) {
  std::vector<bool> v(static_cast<std::size_t>(f.num_vars) + 1, false);
  for (std::uint32_t mask = 0; mask < (1U << f.num_vars); ++mask) {
    for (int k = 1; k <= f.num_vars; ++k) v[static_cast<std::size_t>(k)] = (mask >> (k - 1)) & 1U;
    if (f.satisfied_by(v)) return true;
  }
  return false;
}

bool clause_graph_connected(const SatFormula& f) {
  const std::size_t n = f.clauses.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  auto shares = [&](std::size_t a, std::size_t b) {
    for (int x : f.clauses[a])
      for (int y : f.clauses[b])
        if (std::abs(x) == std::abs(y)) return true;
    return false;
  };
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v] && shares(u, v)) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == n;
}

Outcome sat_reduction() {
  const auto example = reduce_sat_to_sop(parse_dimacs(read_file(g_data / "sat6.cnf")));
  auto z = [&](StationId i) { return example.tree.stations[i].universe; };
  auto ids = [](std::initializer_list<std::uint32_t> v) {
    SubcarrierSet s;
    for (auto x : v) s.insert(SubcarrierId{x});
    return s;
  };
  const bool verbatim = example.tree.size() == 6 && z(0) == ids({1, 2, 4}) && z(1) == ids({1, 2, 3, 6}) &&
                        z(2) == ids({2, 3, 4, 5}) && z(5) == ids({3, 4, 8, 9, 10});

  Rng rng(707);
  int formulas = 0, valid = 0, solved = 0;
  while (formulas < 100) {
    SatFormula f;
    f.num_vars = static_cast<int>(rng.uniform_int(3, 8));
    const auto clauses = rng.uniform_int(1, 5);
    for (int c = 0; c < clauses; ++c) {
      std::vector<int> clause;
      while (clause.size() < 3) {
        const int v = static_cast<int>(rng.uniform_int(1, f.num_vars));
        if (std::any_of(clause.begin(), clause.end(), [&](int l) { return std::abs(l) == v; })) continue;
        clause.push_back(rng.coin() ? v : -v);
      }
      f.clauses.push_back(clause);
    }
    if (!clause_graph_connected(f) || !satisfiable(f)) continue;
    ++formulas;
    const auto inst = reduce_sat_to_sop(f);
    std::size_t edges = 0;
    for (const auto& p : inst.tree.parent) edges += p.has_value();
    if (validate_instance(inst).empty() && edges + 1 == inst.tree.size()) ++valid;
    const auto r = solve_exact(inst, ExactLimits{5, 10});
    solved += !r.no_feasible && r.assignment.feasible;
  }
  return {verbatim && valid == formulas && solved == formulas,
          std::string("six-clause example ") + (verbatim ? "matches" : "differs") + "; " + std::to_string(valid) +
              "/" + std::to_string(formulas) + " reductions are valid trees, exact finds a feasible assignment for " +
              std::to_string(solved) + "/" + std::to_string(formulas)};
}

Outcome airtime() {
  SnowTreeBuilder b;
  b.add_station("A", window(0, 4), 1);
  const auto inst = b.build();
  Assignment a;
  a.sets = {inst.tree.stations[0].universe};
  const auto net = build_network(inst, a, 1);
  SimConfig cfg;
  cfg.mac.initial_backoff_ms = 0;
  Workload wl;
  wl.flows.push_back(Flow{0, 0, 0, kBaseStationNode, 1, 0, 0});
  const auto log = simulate_logged("airtime", net, cfg, wl, 1);
  const auto& p = log.packets.at(0);
  const TimeUs latency = p.delivered ? p.delivered_us - p.generated_us : -1;
  return {latency == 6400, "idle single-packet latency " + std::to_string(latency) + " us (expected 6400 us)"};
}

struct Aggregate {
  int runs = 0;
  double prr = 0, latency = 0, energy = 0;
  std::map<std::size_t, std::pair<double, int>> level_prr;
};

std::map<Algorithm, Aggregate>& ordering_results() {
  static std::map<Algorithm, Aggregate> results;
  return results;
}

void run_snow15(int seeds_override) {
  if (!ordering_results().empty()) return;
  const Scenario sc = load_scenario(g_data / "snow15.scenario");
  const int seeds = seeds_override > 0 ? seeds_override : sc.seeds;
  for (Algorithm algo : {Algorithm::Greedy, Algorithm::Approx, Algorithm::Direct}) {
    auto& agg = ordering_results()[algo];
    for (int k = 0; k < seeds; ++k) {
      const std::uint64_t seed = Rng::derive_seed(sc.seed, static_cast<std::uint64_t>(k));
      const auto r = scenario_assignment(sc, algo, seed);
      const auto net = build_network(sc.instance, r.assignment, sc.nodes_per_snow);
      const auto log = simulate_logged(std::string("snow15/") + to_string(algo) + "/" + std::to_string(k), net, sc.sim,
                                       sc.workload, Rng::derive_seed(seed, 1));
      const auto m = compute_metrics(log, sc.sim.energy);
      ++agg.runs;
      agg.prr += m.global().prr;
      agg.latency += m.global().latency_mean_ms;
      agg.energy += m.global().energy_per_node_mj;
      for (const auto& g : m.groups)
        if (g.group.rfind("level:", 0) == 0) {
          auto& slot = agg.level_prr[std::stoul(g.group.substr(6))];
          slot.first += g.prr;
          ++slot.second;
        }
    }
  }
}

Outcome ordering() {
  run_snow15(0);
  auto& res = ordering_results();
  auto avg = [&](Algorithm a, double Aggregate::*field) { return res[a].*field / res[a].runs; };
  const double pg = avg(Algorithm::Greedy, &Aggregate::prr), pa = avg(Algorithm::Approx, &Aggregate::prr),
               pd = avg(Algorithm::Direct, &Aggregate::prr);
  const double lg = avg(Algorithm::Greedy, &Aggregate::latency), la = avg(Algorithm::Approx, &Aggregate::latency),
               ld = avg(Algorithm::Direct, &Aggregate::latency);
  const double eg = avg(Algorithm::Greedy, &Aggregate::energy), ea = avg(Algorithm::Approx, &Aggregate::energy),
               ed = avg(Algorithm::Direct, &Aggregate::energy);
  const std::size_t deep = res[Algorithm::Greedy].level_prr.rbegin()->first;
  auto level = [&](Algorithm a) {
    const auto& slot = res[a].level_prr[deep];
    return slot.second ? slot.first / slot.second : 0.0;
  };
  const double gap = level(Algorithm::Greedy) - level(Algorithm::Direct);
  const bool pass = pg > pa && pa > pd && lg < la && la < ld && eg < ea && ea < ed && gap >= 0.20;
  std::ostringstream d;
  d << res[Algorithm::Greedy].runs << " seeds; PRR " << fmt(pg) << " > " << fmt(pa) << " > " << fmt(pd)
    << "; latency ms " << fmt(lg, 1) << " < " << fmt(la, 1) << " < " << fmt(ld, 1) << "; energy/node mJ " << fmt(eg, 2)
    << " < " << fmt(ea, 2) << " < " << fmt(ed, 2) << "; level " << deep << " PRR greedy " << fmt(level(Algorithm::Greedy))
    << " vs direct " << fmt(level(Algorithm::Direct)) << " (gap " << fmt(100 * gap, 1) << " pp, need >= 20)";
  return {pass, d.str()};
}

Outcome invariants(bool standalone) {
  if (standalone) {
    // Run the simulations the other criteria would have produced, plus a
    // randomized sweep of small trees.
    (void)airtime();
    run_snow15(3);
  }
  Rng rng(909);
  for (int t = 0; t < 40; ++t) {
    SnowTreeBuilder b;
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    for (std::size_t i = 0; i < n; ++i) b.add_station("R" + std::to_string(i), window(0, 16), 1);
    for (StationId i = 1; i < n; ++i) b.link(i, static_cast<StationId>(rng.uniform_int(0, i - 1)), 16);
    for (StationId i = 0; i < n; ++i)
      for (StationId j = i + 1; j < n; ++j)
        if (!b.build_unchecked().tree.interferers[i].count(j) && rng.coin()) b.interfere(i, j, 16);
    const auto inst = b.build();
    const auto r = t % 2 ? solve_direct(inst) : solve_greedy(inst);
    const int nodes = static_cast<int>(rng.uniform_int(1, 12));
    const auto net = build_network(inst, r.assignment, nodes);
    SimConfig cfg;
    if (rng.coin()) cfg.loss = LossModel{LossMode::OverlapCurve, LossModel::default_curve()};
    cfg.mac.node_hopping = rng.coin();
    cfg.mac.max_retries = static_cast<int>(rng.uniform_int(0, 3));
    const auto wl = Workload::peer_all(n, nodes, static_cast<int>(rng.uniform_int(1, 3)), 0,
                                       static_cast<int>(rng.uniform_int(0, 200)));
    if (n == 1) {
      Workload up;
      for (int k = 0; k < nodes; ++k) up.flows.push_back(Flow{0, k, 0, kBaseStationNode, 3, 0, 20});
      simulate_logged("random/" + std::to_string(t), net, cfg, up, rng.next());
    } else {
      simulate_logged("random/" + std::to_string(t), net, cfg, wl, rng.next());
    }
  }
  std::size_t bad = 0, nodes = 0;
  std::string first;
  for (const auto& [label, log] : sim_logs()) {
    nodes += log.nodes.size();
    const auto problems = check_radio_invariants(log);
    if (!problems.empty()) {
      ++bad;
      if (first.empty()) first = label + ": " + problems.front();
    }
  }
  return {bad == 0, std::to_string(sim_logs().size()) + " simulations, " + std::to_string(nodes) +
                        " node logs; " + std::to_string(bad) + " with violations" + (first.empty() ? "" : " (" + first + ")")};
}

// Binary tree of n stations on windows of m slots; neighbours by index
// interfere. Used for the timing trends.
SopInstance scaling_instance(std::size_t n, std::uint32_t m) {
  SnowTreeBuilder b;
  std::vector<SubcarrierSet> z;
  for (std::size_t i = 0; i < n; ++i) {
    z.push_back(window(static_cast<std::uint32_t>(i % 8) * 4, m));
    b.add_station("T" + std::to_string(i), z.back(), 4);
  }
  auto phi = [&](std::size_t i, std::size_t j) { return static_cast<int>((intersection_size(z[i], z[j]) + 1) / 2); };
  for (StationId i = 1; i < n; ++i) b.link(i, (i - 1) / 2, phi(i, (i - 1) / 2));
  for (StationId i = 1; i + 1 < n; ++i)
    if (!b.build_unchecked().tree.interferers[i].count(i + 1)) b.interfere(i, i + 1, phi(i, i + 1));
  return b.build();
}

double min_time_us(const std::function<void()>& work, int batch) {
  double best = 1e300;
  for (int rep = 0; rep < 7; ++rep) {
    const auto t0 = Clock::now();
    for (int k = 0; k < batch; ++k) work();
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count() / batch;
    best = std::min(best, us);
  }
  return best;
}

double fitted_exponent(const std::vector<double>& n, const std::vector<double>& t) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    mx += std::log(n[k]);
    my += std::log(t[k]);
  }
  mx /= static_cast<double>(n.size());
  my /= static_cast<double>(n.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    sxy += (std::log(n[k]) - mx) * (std::log(t[k]) - my);
    sxx += (std::log(n[k]) - mx) * (std::log(n[k]) - mx);
  }
  return sxy / sxx;
}

Outcome scaling() {
  const std::vector<std::size_t> sizes{4, 8, 16, 32, 64};
  std::vector<double> ns, greedy_t, approx_t;
  for (auto n : sizes) {
    const auto inst = scaling_instance(n, 48);
    const int batch = static_cast<int>(std::max<std::size_t>(2, 256 / n));
    ns.push_back(static_cast<double>(n));
    greedy_t.push_back(min_time_us([&] { (void)solve_greedy(inst); }, batch));
    std::uint64_t seed = 0;
    approx_t.push_back(min_time_us([&] { (void)solve_approx(inst, ++seed); }, batch));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < greedy_t.size(); ++k) monotone &= greedy_t[k] >= greedy_t[k - 1];
  const double eg = fitted_exponent(ns, greedy_t);
  const double ea = fitted_exponent(ns, approx_t);
  std::ostringstream d;
  d << "greedy us";
  for (double t : greedy_t) d << " " << fmt(t, 1);
  d << " (exponent " << fmt(eg, 2) << ", " << (monotone ? "monotone" : "not monotone") << "); approx us";
  for (double t : approx_t) d << " " << fmt(t, 1);
  d << " (exponent " << fmt(ea, 2) << ", need < 1.3)";
  return {monotone && eg < 3.0 && ea < 1.3, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string data;
  app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
  app.add_option("--data", data, "Directory with the sample data files");
  CLI11_PARSE(app, argc, argv);
  if (!data.empty()) g_data = data;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"subcarrier formula", subcarrier_formula},
      {"greedy worked trace", greedy_trace},
      {"greedy <= OPT", greedy_vs_opt},
      {"approximation ratio", approx_ratio},
      {"pairwise overlap expectation", pair_overlap},
      {"feasibility probability", feasibility_probability},
      {"SAT reduction fidelity", sat_reduction},
      {"airtime", airtime},
      {"simulator invariants", [&] { return invariants(only == 9); }},
      {"ordering on the 15-BS topology", ordering},
      {"scaling trends", scaling},
  };
  // The invariant check covers every simulation run before it, so it goes last.
  std::vector<std::size_t> order{0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 8};
  int failed = 0;
  for (std::size_t idx : order) {
    const int number = static_cast<int>(idx) + 1;
    if (only != 0 && only != number) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[idx].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[idx].first
              << "): " << o.detail << " [" << fmt(secs, 2) << " s]" << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
