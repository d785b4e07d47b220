#include <algorithm>
#include <cmath>
#include <map>

#include "snowtree/simulator.hpp"

namespace snowtree {

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  // nearest-rank
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, rank == 0 ? 0 : rank - 1)];
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double mj(double mw, TimeUs us) { return mw * static_cast<double>(us) * 1e-6; }

struct Acc {
  std::size_t offered = 0;
  std::size_t delivered = 0;
  std::vector<double> latencies;
  double energy = 0;
  std::size_t nodes = 0;
};

GroupMetrics finish(const std::string& name, const Acc& a) {
  GroupMetrics g;
  g.group = name;
  g.offered = a.offered;
  g.delivered = a.delivered;
  g.prr = a.offered == 0 ? 0.0 : static_cast<double>(a.delivered) / static_cast<double>(a.offered);
  g.latency_mean_ms = mean(a.latencies);
  g.energy_per_node_mj = a.nodes == 0 ? 0.0 : a.energy / static_cast<double>(a.nodes);
  return g;
}

}  // namespace

const GroupMetrics* RunMetrics::group(const std::string& name) const {
  for (const auto& g : groups)
    if (g.group == name) return &g;
  return nullptr;
}

RunMetrics compute_metrics(const SimLog& log, const EnergyProfile& energy) {
  RunMetrics m;
  m.end_us = log.end_us;
  m.horizon_exhausted = log.horizon_exhausted;

  std::size_t snow_count = 0;
  for (const auto& n : log.nodes) snow_count = std::max<std::size_t>(snow_count, n.snow + 1);
  std::map<std::pair<StationId, int>, std::size_t> node_at;
  for (std::size_t k = 0; k < log.nodes.size(); ++k) {
    const auto& n = log.nodes[k];
    node_at[{n.snow, n.node}] = k;
    m.nodes.push_back(NodeEnergy{n.snow, n.node, mj(energy.tx_mw, n.tx_us), mj(energy.rx_mw, n.rx_us),
                                 mj(energy.sleep_mw, n.sleep_us)});
  }

  std::vector<std::vector<double>> lat(log.flows.size());
  std::vector<std::size_t> offered(log.flows.size(), 0);
  std::vector<std::size_t> delivered(log.flows.size(), 0);
  for (const auto& p : log.packets) {
    ++offered[p.flow];
    if (!p.delivered) {
      ++m.undelivered;
      continue;
    }
    ++delivered[p.flow];
    lat[p.flow].push_back(static_cast<double>(p.delivered_us - p.generated_us) / 1000.0);
  }

  Acc global;
  std::vector<Acc> per_snow(snow_count);
  std::map<std::size_t, Acc> per_level;
  for (std::size_t f = 0; f < log.flows.size(); ++f) {
    FlowMetrics fm;
    fm.flow_id = f;
    fm.flow = log.flows[f];
    fm.level = f < log.flow_level.size() ? log.flow_level[f] : 1;
    fm.offered = offered[f];
    fm.delivered = delivered[f];
    fm.prr = fm.offered == 0 ? 0.0 : static_cast<double>(fm.delivered) / static_cast<double>(fm.offered);
    fm.latency_mean_ms = mean(lat[f]);
    fm.latency_p50_ms = percentile(lat[f], 0.5);
    fm.latency_p95_ms = percentile(lat[f], 0.95);
    if (auto it = node_at.find({fm.flow.src_snow, fm.flow.src_node}); it != node_at.end())
      fm.src_energy = m.nodes[it->second];
    m.flows.push_back(fm);

    for (Acc* a : {&global, &per_snow[fm.flow.src_snow], &per_level[fm.level]}) {
      a->offered += fm.offered;
      a->delivered += fm.delivered;
      a->latencies.insert(a->latencies.end(), lat[f].begin(), lat[f].end());
    }
  }
  for (const auto& n : m.nodes) {
    global.energy += n.total_mj();
    ++global.nodes;
    per_snow[n.snow].energy += n.total_mj();
    ++per_snow[n.snow].nodes;
  }

  m.groups.push_back(finish("global", global));
  for (std::size_t s = 0; s < snow_count; ++s) m.groups.push_back(finish("snow:" + std::to_string(s), per_snow[s]));
  for (const auto& [level, a] : per_level) m.groups.push_back(finish("level:" + std::to_string(level), a));
  return m;
}

std::vector<std::string> check_radio_invariants(const SimLog& log) {
  std::vector<std::string> problems;
  for (const auto& n : log.nodes) {
    const std::string who = "node " + std::to_string(n.snow) + "/" + std::to_string(n.node) + ": ";
    if (n.tx_us < 0 || n.rx_us < 0 || n.sleep_us < 0) problems.push_back(who + "negative state time");
    if (n.tx_us + n.rx_us + n.sleep_us != log.end_us)
      problems.push_back(who + "tx+rx+sleep = " + std::to_string(n.tx_us + n.rx_us + n.sleep_us) +
                         " differs from run length " + std::to_string(log.end_us));
    TimeUs tx = 0;
    TimeUs rx = 0;
    for (std::size_t k = 0; k < n.intervals.size(); ++k) {
      const auto& iv = n.intervals[k];
      if (iv.end < iv.start) problems.push_back(who + "interval ends before it starts");
      if (k > 0 && iv.start < n.intervals[k - 1].end) problems.push_back(who + "overlapping Tx/Rx intervals");
      if (iv.state == RadioState::Sleep) problems.push_back(who + "sleep interval in the active log");
      (iv.state == RadioState::Tx ? tx : rx) += iv.end - iv.start;
    }
    if (tx != n.tx_us || rx != n.rx_us) problems.push_back(who + "interval log disagrees with state totals");
  }
  return problems;
}

}  // namespace snowtree
