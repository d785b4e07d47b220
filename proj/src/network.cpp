#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "snowtree/simulator.hpp"

namespace snowtree {

double RadioParams::bit_rate_bps() const {
  return subcarrier_khz * 1000.0 * bits_per_symbol / spreading_factor;
}

TimeUs RadioParams::airtime_us(int bytes) const {
  // bytes * 8 bits / rate, evaluated as an exact ratio where possible.
  const double us = static_cast<double>(bytes) * 8.0 * 1e6 / bit_rate_bps();
  return static_cast<TimeUs>(std::ceil(us - 1e-6));
}

void RadioParams::validate() const {
  if (!(subcarrier_khz > 0) || spreading_factor <= 0 || bits_per_symbol <= 0)
    throw SimError("radio: bit rate must be positive");
  if (packet_bytes <= 0) throw SimError("radio: packet_bytes must be positive");
  if (ack_bytes < 0) throw SimError("radio: ack_bytes must be non-negative");
}

void EnergyProfile::validate() const {
  if (tx_mw < 0 || rx_mw < 0 || sleep_mw < 0) throw SimError("energy: power draws must be non-negative");
  if (tx_mw < sleep_mw || rx_mw < sleep_mw) throw SimError("energy: tx/rx draw below sleep draw");
}

void MacParams::validate() const {
  if (initial_backoff_ms < 0) throw SimError("mac: initial_backoff_ms must be non-negative");
  if (congestion_backoff_ms <= 0) throw SimError("mac: congestion_backoff_ms must be positive");
  if (bs_link_backoff_ms <= 0) throw SimError("mac: bs_link_backoff_ms must be positive");
  if (beacon_period_ms <= 0) throw SimError("mac: beacon_period_ms must be positive");
  if (max_retries < 0) throw SimError("mac: max_retries must be non-negative");
}

const char* to_string(LossMode mode) {
  return mode == LossMode::CollisionOnly ? "collision-only" : "overlap-curve";
}

std::optional<LossMode> loss_mode_from_string(const std::string& s) {
  if (s == "collision-only") return LossMode::CollisionOnly;
  if (s == "overlap-curve") return LossMode::OverlapCurve;
  return std::nullopt;
}

double LossModel::prr_at(double overlap) const {
  if (curve.empty()) return 1.0;
  if (overlap <= curve.front().first) return curve.front().second;
  if (overlap >= curve.back().first) return curve.back().second;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const auto [x1, y1] = curve[k];
    if (overlap > x1) continue;
    const auto [x0, y0] = curve[k - 1];
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (overlap - x0) / (x1 - x0);
  }
  return curve.back().second;
}

void LossModel::validate() const {
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k].second < 0 || curve[k].second > 1) throw SimError("loss: curve prr outside [0, 1]");
    if (k > 0 && curve[k].first < curve[k - 1].first)
      throw SimError("loss: curve overlap fractions must be non-decreasing");
  }
  if (mode == LossMode::OverlapCurve && curve.empty()) throw SimError("loss: overlap-curve mode needs a curve");
}

std::vector<std::pair<double, double>> LossModel::default_curve() {
  return {{0.0, 1.0}, {0.2, 0.97}, {0.4, 0.92}, {0.6, 0.85}, {0.8, 0.70}, {1.0, 0.50}};
}

void Workload::validate(std::size_t snow_count, int nodes_per_snow) const {
  for (std::size_t k = 0; k < flows.size(); ++k) {
    const auto& f = flows[k];
    const std::string where = "workload flow " + std::to_string(k) + ": ";
    if (f.src_snow >= snow_count || f.dst_snow >= snow_count) throw SimError(where + "unknown SNOW");
    if (f.src_node < 0 || f.src_node >= nodes_per_snow) throw SimError(where + "source node out of range");
    if (f.dst_node != kBaseStationNode && (f.dst_node < 0 || f.dst_node >= nodes_per_snow))
      throw SimError(where + "destination node out of range");
    if (f.src_snow == f.dst_snow && f.src_node == f.dst_node) throw SimError(where + "source equals destination");
    if (f.packets < 0) throw SimError(where + "negative packet count");
    if (f.sleep_min_ms < 0 || f.sleep_max_ms < f.sleep_min_ms) throw SimError(where + "bad sleep bounds");
  }
}

Workload Workload::peer_all(std::size_t snow_count, int nodes_per_snow, int packets_per_destination,
                            int sleep_min_ms, int sleep_max_ms) {
  Workload wl;
  for (StationId s = 0; s < snow_count; ++s)
    for (int k = 0; k < nodes_per_snow; ++k)
      for (StationId d = 0; d < snow_count; ++d)
        if (d != s) wl.flows.push_back(Flow{s, k, d, k, packets_per_destination, sleep_min_ms, sleep_max_ms});
  return wl;
}

Network build_network(const SopInstance& inst, const Assignment& a, int nodes_per_snow) {
  const auto& t = inst.tree;
  const std::size_t n = t.size();
  if (a.sets.size() != n) throw SimError("assignment does not cover every station");
  if (nodes_per_snow < 0) throw SimError("nodes_per_snow must be non-negative");

  Network net;
  net.tree = t;
  net.nodes_per_snow = nodes_per_snow;
  net.assigned.resize(n);
  for (StationId i = 0; i < n; ++i) net.assigned[i].assign(a.sets[i].begin(), a.sets[i].end());

  // Distinct link subcarriers: bipartite matching of links to common
  // subcarriers, trying smaller ids first.
  net.link_subcarrier.assign(n, std::nullopt);
  std::vector<std::vector<SubcarrierId>> options(n);
  for (StationId c = 0; c < n; ++c) {
    if (!t.parent[c]) continue;
    const StationId p = *t.parent[c];
    const SubcarrierSet common = intersection(a.sets[c], a.sets[p]);
    if (common.empty())
      throw SimError("tree link " + std::to_string(c) + "->" + std::to_string(p) + " has no common subcarrier");
    options[c].assign(common.begin(), common.end());
  }
  std::map<SubcarrierId, StationId> owner;
  std::function<bool(StationId, std::set<SubcarrierId>&)> augment = [&](StationId c, std::set<SubcarrierId>& seen) {
    for (const SubcarrierId s : options[c]) {
      if (!seen.insert(s).second) continue;
      auto it = owner.find(s);
      if (it == owner.end() || augment(it->second, seen)) {
        owner[s] = c;
        return true;
      }
    }
    return false;
  };
  for (StationId c = 0; c < n; ++c) {
    if (!t.parent[c]) continue;
    std::set<SubcarrierId> seen;
    if (!augment(c, seen))
      throw SimError("cannot reserve a distinct subcarrier for tree link " + std::to_string(c) + "->" +
                     std::to_string(*t.parent[c]));
  }
  std::set<SubcarrierId> reserved;
  for (const auto& [s, c] : owner) {
    net.link_subcarrier[c] = s;
    reserved.insert(s);
  }

  net.node_pool.resize(n);
  net.node_subcarrier.resize(n);
  for (StationId i = 0; i < n; ++i) {
    for (const SubcarrierId s : net.assigned[i])
      if (!reserved.count(s)) net.node_pool[i].push_back(s);
    const auto& pool = net.node_pool[i];
    if (pool.empty() && nodes_per_snow > 0)
      throw SimError("SNOW " + std::to_string(i) + " has no subcarrier left for its nodes");
    const std::size_t m = pool.size();
    const auto nodes = static_cast<std::size_t>(nodes_per_snow);
    for (std::size_t k = 0; k < nodes; ++k) {
      // Unique subcarriers spread over the pool while they last, then shared round-robin.
      const std::size_t idx = nodes <= m ? k * m / nodes : k % m;
      net.node_subcarrier[i].push_back(pool[idx]);
    }
  }

  net.audible.assign(n, std::vector<bool>(n, false));
  net.pair_overlap.assign(n, std::vector<double>(n, 0.0));
  net.snow_overlap.assign(n, 0.0);
  for (StationId r = 0; r < n; ++r) {
    net.audible[r][r] = true;
    for (StationId q : t.interferers[r]) {
      net.audible[r][q] = true;
      const auto common_z = intersection_size(t.stations[r].universe, t.stations[q].universe);
      const auto common_x = intersection_size(a.sets[r], a.sets[q]);
      const double frac = common_z == 0 ? 0.0 : static_cast<double>(common_x) / static_cast<double>(common_z);
      net.pair_overlap[r][q] = frac;
      net.snow_overlap[r] = std::max(net.snow_overlap[r], frac);
    }
  }
  return net;
}

}  // namespace snowtree
