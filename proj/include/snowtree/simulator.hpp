#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snowtree/model.hpp"

namespace snowtree {

class SimError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using TimeUs = std::int64_t;

struct RadioParams {
  double subcarrier_khz = 400.0;
  int spreading_factor = 8;
  int bits_per_symbol = 1;  // BPSK
  int packet_bytes = 40;
  int ack_bytes = 8;
  double node_tx_dbm = 0.0;
  double bs_tx_dbm = 15.0;
  double rx_sensitivity_dbm = -94.0;

  double bit_rate_bps() const;
  /// Airtime of `bytes` rounded up to whole microseconds.
  TimeUs airtime_us(int bytes) const;
  TimeUs packet_airtime_us() const { return airtime_us(packet_bytes); }
  void validate() const;
};

struct EnergyProfile {
  // Illustrative defaults in the range of a sub-GHz transceiver datasheet.
  double tx_mw = 57.0;
  double rx_mw = 63.0;
  double sleep_mw = 0.003;

  void validate() const;
};

struct MacParams {
  int initial_backoff_ms = 10;     // 0 disables the initial back-off
  int congestion_backoff_ms = 20;
  int bs_link_backoff_ms = 10;
  int beacon_period_ms = 200;
  int max_retries = 3;             // retransmissions after the first attempt
  bool node_hopping = false;       // nodes pick a random subcarrier per attempt

  void validate() const;
};

enum class LossMode { CollisionOnly, OverlapCurve };

const char* to_string(LossMode mode);
std::optional<LossMode> loss_mode_from_string(const std::string& s);

struct LossModel {
  LossMode mode = LossMode::CollisionOnly;
  std::vector<std::pair<double, double>> curve;  // (overlap fraction, prr)

  /// Piecewise-linear PRR, clamped to the end points; 1.0 for an empty curve.
  double prr_at(double overlap) const;
  void validate() const;

  /// Reliability-vs-overlap curve shipped with the sample scenarios. Only
  /// the (0.6, 0.85) point is a measured value; the rest is illustrative.
  static std::vector<std::pair<double, double>> default_curve();
};

/// Destination node id used for packets addressed to the BS itself.
inline constexpr int kBaseStationNode = -1;

struct Flow {
  StationId src_snow = 0;
  int src_node = 0;
  StationId dst_snow = 0;
  int dst_node = kBaseStationNode;
  int packets = 1;
  int sleep_min_ms = 0;
  int sleep_max_ms = 50;

  bool operator==(const Flow&) const = default;
};

struct Workload {
  std::vector<Flow> flows;

  void validate(std::size_t snow_count, int nodes_per_snow) const;

  /// Node k of every SNOW sends `packets_per_destination` packets to node k
  /// of every other SNOW.
  static Workload peer_all(std::size_t snow_count, int nodes_per_snow, int packets_per_destination,
                           int sleep_min_ms, int sleep_max_ms);
};

/// One SNOW-tree ready to simulate: per-node subcarriers and reserved
/// BS-BS link subcarriers.
struct Network {
  SnowTree tree;
  int nodes_per_snow = 0;
  std::vector<std::vector<SubcarrierId>> assigned;         // X_i, ascending
  std::vector<std::optional<SubcarrierId>> link_subcarrier;  // f_{i,p(i)}, by child id
  std::vector<std::vector<SubcarrierId>> node_pool;        // X_i minus all link subcarriers
  std::vector<std::vector<SubcarrierId>> node_subcarrier;  // [snow][node]
  std::vector<std::vector<bool>> audible;                  // audible[r][q]: SNOW q reaches SNOW r
  std::vector<std::vector<double>> pair_overlap;           // |X_i ∩ X_j| / |Z_i ∩ Z_j|
  std::vector<double> snow_overlap;                        // max pair_overlap over interferers

  std::size_t snow_count() const { return tree.size(); }
};

/// Throws SimError naming the link when a tree link has no common
/// subcarrier or when distinct link subcarriers cannot be chosen.
Network build_network(const SopInstance& inst, const Assignment& a, int nodes_per_snow);

class Rng;

enum class FrameKind { Uplink, Link, Beacon };

/// One transmission on one subcarrier. Uplink and Link frames are received
/// by the BS of rx_snow; Beacon frames by the nodes of rx_snow.
struct AirFrame {
  FrameKind kind = FrameKind::Uplink;
  SubcarrierId slot;
  TimeUs start = 0;
  TimeUs end = 0;
  StationId tx_snow = 0;
  StationId rx_snow = 0;
};

/// True when `other` destroys `victim` at victim's receiver: same slot,
/// overlapping in time, and other's SNOW audible there. A BS's own
/// transmissions do not disturb its own receptions, except two link frames
/// on the shared link subcarrier.
bool interferes(const AirFrame& victim, const AirFrame& other, const std::vector<std::vector<bool>>& audible);

/// Per-frame success. Collision-only: fails iff some other frame interferes.
/// Overlap-curve: survivors additionally pass a Bernoulli draw with the PRR
/// at the overlap fraction of the SNOWs involved (pair overlap for link
/// frames, receiver SNOW overlap otherwise).
std::vector<bool> collision_check(const std::vector<AirFrame>& frames, const Network& net, const LossModel& loss,
                                  Rng& rng);

struct SimConfig {
  RadioParams radio;
  MacParams mac;
  EnergyProfile energy;
  LossModel loss;
  TimeUs horizon_us = 3'600'000'000LL;
  bool record_trace = false;
};

enum class RadioState { Sleep, Rx, Tx };

struct RadioInterval {
  TimeUs start = 0;
  TimeUs end = 0;
  RadioState state = RadioState::Rx;
};

struct PacketRecord {
  std::size_t flow = 0;
  TimeUs generated_us = -1;
  bool delivered = false;
  TimeUs delivered_us = -1;
  int hops = 0;           // successful receptions along the path
  int uplink_attempts = 0;
};

struct NodeLog {
  StationId snow = 0;
  int node = 0;
  TimeUs tx_us = 0;
  TimeUs rx_us = 0;
  TimeUs sleep_us = 0;
  std::vector<RadioInterval> intervals;  // non-sleep intervals, chronological
};

struct TraceEvent {
  TimeUs time = 0;
  int kind = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;

  bool operator==(const TraceEvent&) const = default;
};

/// Raw output of one run.
struct SimLog {
  TimeUs end_us = 0;
  bool horizon_exhausted = false;
  std::vector<Flow> flows;
  std::vector<std::size_t> flow_level;  // BSs on the tree path
  std::vector<PacketRecord> packets;
  std::vector<NodeLog> nodes;           // snow-major
  std::uint64_t digest = 0;             // hash over every processed event
  std::vector<TraceEvent> trace;        // only with record_trace
  std::size_t link_collisions = 0;
  std::size_t cca_busy = 0;
  std::size_t dropped_uplink = 0;    // node -> BS retries exhausted
  std::size_t dropped_link = 0;      // BS -> BS retries exhausted
  std::size_t dropped_downlink = 0;  // BS -> node retries exhausted
};

SimLog simulate(const Network& net, const SimConfig& cfg, const Workload& wl, std::uint64_t seed);

struct NodeEnergy {
  StationId snow = 0;
  int node = 0;
  double tx_mj = 0;
  double rx_mj = 0;
  double sleep_mj = 0;
  double total_mj() const { return tx_mj + rx_mj + sleep_mj; }
};

struct FlowMetrics {
  std::size_t flow_id = 0;
  Flow flow;
  std::size_t level = 1;
  std::size_t offered = 0;
  std::size_t delivered = 0;
  double prr = 0;
  double latency_mean_ms = 0;
  double latency_p50_ms = 0;
  double latency_p95_ms = 0;
  NodeEnergy src_energy;
};

struct GroupMetrics {
  std::string group;  // "global", "snow:<id>", "level:<n>"
  std::size_t offered = 0;
  std::size_t delivered = 0;
  double prr = 0;
  double latency_mean_ms = 0;
  double energy_per_node_mj = 0;  // 0 for level groups
};

struct RunMetrics {
  std::vector<FlowMetrics> flows;
  std::vector<NodeEnergy> nodes;
  std::vector<GroupMetrics> groups;  // global first, then per SNOW, then per level
  TimeUs end_us = 0;
  bool horizon_exhausted = false;
  std::size_t undelivered = 0;

  const GroupMetrics& global() const { return groups.front(); }
  const GroupMetrics* group(const std::string& name) const;
};

RunMetrics compute_metrics(const SimLog& log, const EnergyProfile& energy);

/// Convenience: simulate then compute metrics.
RunMetrics run(const Network& net, const SimConfig& cfg, const Workload& wl, std::uint64_t seed);

/// Checks time conservation and half-duplex for every node; returns the
/// problems found (empty when both invariants hold).
std::vector<std::string> check_radio_invariants(const SimLog& log);

}  // namespace snowtree
