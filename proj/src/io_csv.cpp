#include <algorithm>
#include <map>
#include <sstream>

#include "snowtree/io.hpp"

namespace snowtree {

std::string flows_csv(const RunMetrics& m) {
  std::ostringstream out;
  out << "flow_id,src_snow,src_node,dst_snow,dst_node,level,offered,delivered,prr,latency_mean_ms,"
         "latency_p50_ms,latency_p95_ms,src_tx_mj,src_rx_mj,src_sleep_mj,src_total_mj\n";
  for (const auto& f : m.flows) {
    out << f.flow_id << "," << f.flow.src_snow << "," << f.flow.src_node << "," << f.flow.dst_snow << ","
        << (f.flow.dst_node == kBaseStationNode ? std::string("bs") : std::to_string(f.flow.dst_node)) << ","
        << f.level << "," << f.offered << "," << f.delivered << "," << format_fixed(f.prr) << ","
        << format_fixed(f.latency_mean_ms) << "," << format_fixed(f.latency_p50_ms) << ","
        << format_fixed(f.latency_p95_ms) << "," << format_fixed(f.src_energy.tx_mj) << ","
        << format_fixed(f.src_energy.rx_mj) << "," << format_fixed(f.src_energy.sleep_mj) << ","
        << format_fixed(f.src_energy.total_mj()) << "\n";
  }
  return out.str();
}

std::string nodes_csv(const RunMetrics& m) {
  std::ostringstream out;
  out << "snow,node,tx_mj,rx_mj,sleep_mj,total_mj\n";
  for (const auto& n : m.nodes)
    out << n.snow << "," << n.node << "," << format_fixed(n.tx_mj) << "," << format_fixed(n.rx_mj) << ","
        << format_fixed(n.sleep_mj) << "," << format_fixed(n.total_mj()) << "\n";
  return out.str();
}

std::string groups_csv(const RunMetrics& m) {
  std::ostringstream out;
  out << "group,offered,delivered,prr,latency_mean_ms,energy_per_node_mj\n";
  for (const auto& g : m.groups)
    out << g.group << "," << g.offered << "," << g.delivered << "," << format_fixed(g.prr) << ","
        << format_fixed(g.latency_mean_ms) << "," << format_fixed(g.energy_per_node_mj) << "\n";
  return out.str();
}

namespace {

// "global" first, then levels by number, then anything else by name.
std::pair<int, long> group_key(const std::string& g) {
  if (g == "global") return {0, 0};
  if (g.rfind("level:", 0) == 0) return {1, std::stol(g.substr(6))};
  if (g.rfind("snow:", 0) == 0) return {2, std::stol(g.substr(5))};
  return {3, 0};
}

}  // namespace

std::string comparison_csv(std::vector<ComparisonRow> rows) {
  std::map<std::string, double> global_prr;
  for (const auto& r : rows)
    if (r.group == "global") global_prr[r.algorithm] = r.prr;
  std::sort(rows.begin(), rows.end(), [&](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.algorithm != b.algorithm) {
      const double pa = global_prr[a.algorithm];
      const double pb = global_prr[b.algorithm];
      if (pa != pb) return pa > pb;
      return a.algorithm < b.algorithm;
    }
    const auto ka = group_key(a.group);
    const auto kb = group_key(b.group);
    if (ka != kb) return ka < kb;
    return a.group < b.group;
  });
  std::ostringstream out;
  out << "algorithm,group,runs,metric,feasible_fraction,prr,latency_mean_ms,energy_per_node_mj\n";
  for (const auto& r : rows)
    out << r.algorithm << "," << r.group << "," << r.runs << "," << format_fixed(r.metric, 2) << ","
        << format_fixed(r.feasible_fraction) << "," << format_fixed(r.prr) << "," << format_fixed(r.latency_mean_ms)
        << "," << format_fixed(r.energy_per_node_mj) << "\n";
  return out.str();
}

}  // namespace snowtree
