#include "snowtree/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "snowtree/rng.hpp"

namespace snowtree {

bool interferes(const AirFrame& victim, const AirFrame& other, const std::vector<std::vector<bool>>& audible) {
  if (other.slot != victim.slot) return false;
  if (!(other.start < victim.end && victim.start < other.end)) return false;
  if (!audible[victim.rx_snow][other.tx_snow]) return false;
  const bool victim_at_bs = victim.kind != FrameKind::Beacon;
  const bool other_from_bs = other.kind != FrameKind::Uplink;
  if (victim_at_bs && other_from_bs && other.tx_snow == victim.rx_snow)
    return victim.kind == FrameKind::Link && other.kind == FrameKind::Link;
  return true;
}

namespace {

double frame_overlap(const AirFrame& f, const Network& net) {
  if (f.kind == FrameKind::Link) return net.pair_overlap[f.tx_snow][f.rx_snow];
  return net.snow_overlap[f.rx_snow];
}

}  // namespace

std::vector<bool> collision_check(const std::vector<AirFrame>& frames, const Network& net, const LossModel& loss,
                                  Rng& rng) {
  std::vector<bool> ok(frames.size(), true);
  for (std::size_t v = 0; v < frames.size(); ++v)
    for (std::size_t o = 0; o < frames.size(); ++o)
      if (o != v && interferes(frames[v], frames[o], net.audible)) {
        ok[v] = false;
        break;
      }
  if (loss.mode == LossMode::OverlapCurve)
    for (std::size_t v = 0; v < frames.size(); ++v)
      if (ok[v]) ok[v] = rng.bernoulli(loss.prr_at(frame_overlap(frames[v], net)));
  return ok;
}

namespace {

enum class Ev : int { TxEnd, BeaconEnd, NodeGenerate, NodeCca, NodeAckDone, LinkTry, BeaconStart };

struct Event {
  TimeUs time;
  int cls;  // frame ends before anything else at the same instant
  std::uint64_t seq;
  Ev kind;
  std::int64_t a;
  std::int64_t b;
};

struct EventLater {
  bool operator()(const Event& x, const Event& y) const {
    return std::tie(x.time, x.cls, x.seq) > std::tie(y.time, y.cls, y.seq);
  }
};

struct Frame {
  AirFrame air;
  bool active = true;
  bool collided = false;
  bool peer_collision = false;
  std::int64_t owner = -1;   // node index (uplink) or link key (link)
  std::int64_t packet = -1;
};

struct NodeRt {
  StationId snow = 0;
  int node = 0;
  SubcarrierId home;
  SubcarrierId slot;
  std::vector<std::size_t> plan;
  std::size_t cursor = 0;
  std::int64_t current = -1;
  int attempts = 0;
  bool mac_awake = false;
  bool beacon_listen = false;
  bool transmitting = false;
  bool beacon_ok = false;
  bool p2p = false;
  RadioState state = RadioState::Sleep;
  TimeUs since = 0;
  std::deque<std::size_t> downlink;
  int downlink_attempts = 0;
};

struct LinkDir {
  std::deque<std::size_t> queue;
  bool sending = false;
  bool waiting = false;
  int tries = 0;  // failed attempts of the head packet, peer collisions excluded
  std::size_t frame = 0;
};

struct BeaconPayload {
  std::size_t node;
  std::size_t packet;
  std::size_t frame;
};

class Engine {
public:
  Engine(const Network& net, const SimConfig& cfg, const Workload& wl, std::uint64_t seed)
      : net_(net), cfg_(cfg), rng_(seed), air_(cfg.radio.packet_airtime_us()),
        ack_(cfg.radio.ack_bytes > 0 ? cfg.radio.airtime_us(cfg.radio.ack_bytes) : 0),
        period_(static_cast<TimeUs>(cfg.mac.beacon_period_ms) * 1000) {
    const std::size_t n = net.snow_count();
    const int per = net.nodes_per_snow;
    log_.flows = wl.flows;

    next_hop_.assign(n, std::vector<StationId>(n, 0));
    for (StationId s = 0; s < n; ++s)
      for (StationId d = 0; d < n; ++d) {
        const auto p = net.tree.path(s, d);
        next_hop_[s][d] = p.size() > 1 ? p[1] : s;
      }
    for (const auto& f : wl.flows) log_.flow_level.push_back(net.tree.path(f.src_snow, f.dst_snow).size());

    nodes_.resize(n * static_cast<std::size_t>(per));
    log_.nodes.resize(nodes_.size());
    for (StationId s = 0; s < n; ++s)
      for (int k = 0; k < per; ++k) {
        auto& nd = nodes_[index(s, k)];
        nd.snow = s;
        nd.node = k;
        nd.home = nd.slot = net.node_subcarrier[s][static_cast<std::size_t>(k)];
        log_.nodes[index(s, k)].snow = s;
        log_.nodes[index(s, k)].node = k;
      }

    // Per node, packets of its flows interleaved round-robin.
    std::vector<std::vector<std::size_t>> flows_of(nodes_.size());
    for (std::size_t fi = 0; fi < wl.flows.size(); ++fi) {
      const auto& f = wl.flows[fi];
      flows_of[index(f.src_snow, f.src_node)].push_back(fi);
      if (f.dst_node != kBaseStationNode) nodes_[index(f.dst_snow, f.dst_node)].p2p = true;
    }
    for (std::size_t g = 0; g < nodes_.size(); ++g) {
      std::vector<int> left;
      int most = 0;
      for (std::size_t fi : flows_of[g]) {
        left.push_back(wl.flows[fi].packets);
        most = std::max(most, wl.flows[fi].packets);
      }
      for (int round = 0; round < most; ++round)
        for (std::size_t k = 0; k < flows_of[g].size(); ++k)
          if (round < left[k]) {
            nodes_[g].plan.push_back(log_.packets.size());
            log_.packets.push_back(PacketRecord{flows_of[g][k]});
          }
    }
    outstanding_ = log_.packets.size();
  }

  SimLog run() {
    const std::size_t n = net_.snow_count();
    for (std::size_t g = 0; g < nodes_.size(); ++g)
      if (!nodes_[g].plan.empty()) push(sleep_for(nodes_[g].plan.front()), Ev::NodeGenerate, static_cast<std::int64_t>(g));
    // Only SNOWs with downlink destinations beacon.
    for (StationId d = 0; d < n; ++d)
      for (int k = 0; k < net_.nodes_per_snow; ++k)
        if (nodes_[index(d, k)].p2p) {
          push(beacon_offset(d), Ev::BeaconStart, d);
          break;
        }

    TimeUs end = 0;
    while (outstanding_ > 0 && !queue_.empty()) {
      const Event ev = queue_.top();
      if (ev.time > cfg_.horizon_us) {
        log_.horizon_exhausted = true;
        end = cfg_.horizon_us;
        break;
      }
      queue_.pop();
      now_ = ev.time;
      end = now_;
      mix(ev);
      dispatch(ev);
    }
    if (outstanding_ > 0 && !log_.horizon_exhausted) end = now_;
    log_.end_us = end;
    for (std::size_t g = 0; g < nodes_.size(); ++g) close_node(g, end);
    return std::move(log_);
  }

private:
  std::size_t index(StationId s, int k) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(net_.nodes_per_snow) + static_cast<std::size_t>(k);
  }

  TimeUs beacon_offset(StationId d) const {
    return period_ * static_cast<TimeUs>(d) / static_cast<TimeUs>(net_.snow_count());
  }

  TimeUs backoff_us(int window_ms) {
    if (window_ms <= 0) return 0;
    return rng_.uniform_int(1, window_ms) * 1000;
  }

  TimeUs sleep_for(std::size_t packet) {
    const auto& f = log_.flows[log_.packets[packet].flow];
    return rng_.uniform_int(f.sleep_min_ms, f.sleep_max_ms) * 1000;
  }

  void push(TimeUs t, Ev kind, std::int64_t a, std::int64_t b = 0) {
    const int cls = (kind == Ev::TxEnd || kind == Ev::BeaconEnd) ? 0 : 1;
    queue_.push(Event{t, cls, seq_++, kind, a, b});
  }

  void mix(const Event& ev) {
    for (std::int64_t v : {ev.time, static_cast<std::int64_t>(ev.kind), ev.a, ev.b}) {
      auto u = static_cast<std::uint64_t>(v);
      for (int k = 0; k < 8; ++k) {
        digest_ ^= (u >> (8 * k)) & 0xffU;
        digest_ *= 0x100000001b3ULL;
      }
    }
    log_.digest = digest_;
    if (cfg_.record_trace) log_.trace.push_back(TraceEvent{ev.time, static_cast<int>(ev.kind), ev.a, ev.b});
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case Ev::NodeGenerate: node_generate(static_cast<std::size_t>(ev.a)); break;
      case Ev::NodeCca: node_cca(static_cast<std::size_t>(ev.a)); break;
      case Ev::NodeAckDone: node_ack_done(static_cast<std::size_t>(ev.a), ev.b != 0); break;
      case Ev::TxEnd: tx_end(static_cast<std::size_t>(ev.a)); break;
      case Ev::LinkTry: link_try(static_cast<StationId>(ev.a), static_cast<StationId>(ev.b)); break;
      case Ev::BeaconStart: beacon_start(static_cast<StationId>(ev.a)); break;
      case Ev::BeaconEnd: beacon_end(static_cast<StationId>(ev.a)); break;
    }
  }

  // --- radio accounting -----------------------------------------------------

  void settle(std::size_t g) {
    auto& nd = nodes_[g];
    const RadioState want = nd.transmitting                       ? RadioState::Tx
                            : (nd.mac_awake || nd.beacon_listen) ? RadioState::Rx
                                                                 : RadioState::Sleep;
    if (want == nd.state) return;
    account(g, now_);
    nd.state = want;
  }

  void account(std::size_t g, TimeUs until) {
    auto& nd = nodes_[g];
    auto& lg = log_.nodes[g];
    const TimeUs dt = until - nd.since;
    if (dt > 0) {
      switch (nd.state) {
        case RadioState::Tx: lg.tx_us += dt; break;
        case RadioState::Rx: lg.rx_us += dt; break;
        case RadioState::Sleep: lg.sleep_us += dt; break;
      }
      if (nd.state != RadioState::Sleep) {
        if (!lg.intervals.empty() && lg.intervals.back().state == nd.state && lg.intervals.back().end == nd.since)
          lg.intervals.back().end = until;
        else
          lg.intervals.push_back(RadioInterval{nd.since, until, nd.state});
      }
    }
    nd.since = until;
  }

  void close_node(std::size_t g, TimeUs end) { account(g, end); }

  // --- frames ---------------------------------------------------------------

  std::size_t start_frame(const AirFrame& air, std::int64_t owner, std::int64_t packet) {
    const std::size_t id = frames_.size();
    frames_.push_back(Frame{air, true, false, false, owner, packet});
    auto& bucket = active_[air.slot.index];
    for (std::size_t other : bucket) {
      auto& o = frames_[other];
      auto& me = frames_[id];
      if (interferes(o.air, me.air, net_.audible)) {
        o.collided = true;
        if (o.air.kind == FrameKind::Link && me.air.kind == FrameKind::Link) o.peer_collision = true;
      }
      if (interferes(me.air, o.air, net_.audible)) {
        me.collided = true;
        if (o.air.kind == FrameKind::Link && me.air.kind == FrameKind::Link) me.peer_collision = true;
      }
    }
    bucket.push_back(id);
    return id;
  }

  void end_frame(std::size_t id) {
    auto& f = frames_[id];
    f.active = false;
    auto& bucket = active_[f.air.slot.index];
    bucket.erase(std::find(bucket.begin(), bucket.end(), id));
  }

  bool channel_busy(StationId snow, SubcarrierId slot) const {
    auto it = active_.find(slot.index);
    if (it == active_.end()) return false;
    for (std::size_t id : it->second)
      if (net_.audible[snow][frames_[id].air.tx_snow]) return true;
    return false;
  }

  bool survives(double overlap) {
    if (cfg_.loss.mode != LossMode::OverlapCurve) return true;
    return rng_.bernoulli(cfg_.loss.prr_at(overlap));
  }

  // --- packet fate ----------------------------------------------------------

  void resolve() {
    if (outstanding_ > 0) --outstanding_;
  }

  void deliver(std::size_t pkt) {
    auto& p = log_.packets[pkt];
    p.delivered = true;
    p.delivered_us = now_;
    resolve();
  }

  void drop(std::size_t) { resolve(); }

  void bs_receive(StationId s, std::size_t pkt) {
    auto& p = log_.packets[pkt];
    ++p.hops;
    const auto& f = log_.flows[p.flow];
    if (f.dst_snow == s) {
      if (f.dst_node == kBaseStationNode) {
        deliver(pkt);
      } else {
        nodes_[index(s, f.dst_node)].downlink.push_back(pkt);
      }
      return;
    }
    const StationId h = next_hop_[s][f.dst_snow];
    auto& l = links_[{s, h}];
    l.queue.push_back(pkt);
    if (!l.sending && !l.waiting) link_try(s, h);
  }

  // --- nodes ----------------------------------------------------------------

  void pick_slot(NodeRt& nd) {
    if (!cfg_.mac.node_hopping) return;
    const auto& pool = net_.node_pool[nd.snow];
    nd.slot = pool[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
  }

  void node_generate(std::size_t g) {
    auto& nd = nodes_[g];
    const std::size_t pkt = nd.plan[nd.cursor++];
    nd.current = static_cast<std::int64_t>(pkt);
    nd.attempts = 0;
    log_.packets[pkt].generated_us = now_;
    nd.mac_awake = true;
    settle(g);
    pick_slot(nd);
    push(now_ + backoff_us(cfg_.mac.initial_backoff_ms), Ev::NodeCca, static_cast<std::int64_t>(g));
  }

  bool beacon_conflict(const NodeRt& nd) const {
    if (nd.beacon_listen) return true;
    if (!nd.p2p) return false;
    const TimeUs off = beacon_offset(nd.snow);
    const TimeUs start = now_;
    const TimeUs end = now_ + air_;
    TimeUs k = start >= off ? (start - off) / period_ : -1;
    for (TimeUs j = k; j <= k + 2; ++j) {
      const TimeUs b = off + j * period_;
      if (b < end && start < b + air_) return true;
    }
    return false;
  }

  void node_cca(std::size_t g) {
    auto& nd = nodes_[g];
    if (channel_busy(nd.snow, nd.slot) || beacon_conflict(nd)) {
      ++log_.cca_busy;
      push(now_ + backoff_us(cfg_.mac.congestion_backoff_ms), Ev::NodeCca, static_cast<std::int64_t>(g));
      return;
    }
    nd.transmitting = true;
    settle(g);
    ++nd.attempts;
    ++log_.packets[static_cast<std::size_t>(nd.current)].uplink_attempts;
    const std::size_t id = start_frame(AirFrame{FrameKind::Uplink, nd.slot, now_, now_ + air_, nd.snow, nd.snow},
                                       static_cast<std::int64_t>(g), nd.current);
    push(now_ + air_, Ev::TxEnd, static_cast<std::int64_t>(id));
  }

  void uplink_end(Frame& f) {
    const auto g = static_cast<std::size_t>(f.owner);
    auto& nd = nodes_[g];
    nd.transmitting = false;
    settle(g);
    const bool ok = !f.collided && survives(net_.snow_overlap[nd.snow]);
    push(now_ + ack_, Ev::NodeAckDone, static_cast<std::int64_t>(g), ok ? 1 : 0);
    if (ok) bs_receive(nd.snow, static_cast<std::size_t>(f.packet));
  }

  void node_ack_done(std::size_t g, bool ok) {
    auto& nd = nodes_[g];
    if (!ok) {
      if (nd.attempts <= cfg_.mac.max_retries) {
        pick_slot(nd);
        push(now_ + backoff_us(cfg_.mac.initial_backoff_ms), Ev::NodeCca, static_cast<std::int64_t>(g));
        return;
      }
      ++log_.dropped_uplink;
      drop(static_cast<std::size_t>(nd.current));
    }
    nd.current = -1;
    nd.mac_awake = false;
    settle(g);
    if (nd.cursor < nd.plan.size())
      push(now_ + sleep_for(nd.plan[nd.cursor]), Ev::NodeGenerate, static_cast<std::int64_t>(g));
  }

  // --- BS-BS links ------------------------------------------------------------

  void link_try(StationId s, StationId h) {
    auto& l = links_[{s, h}];
    l.waiting = false;
    if (l.sending || l.queue.empty()) return;
    auto& peer = links_[{h, s}];
    if (peer.sending && frames_[peer.frame].air.start < now_) {
      // Our Rx radio hears the peer on the link subcarrier: wait it out.
      l.waiting = true;
      push(frames_[peer.frame].air.end + backoff_us(cfg_.mac.bs_link_backoff_ms), Ev::LinkTry, s, h);
      return;
    }
    const StationId child = net_.tree.parent[s] && *net_.tree.parent[s] == h ? s : h;
    const SubcarrierId f = *net_.link_subcarrier[child];
    l.sending = true;
    l.frame = start_frame(AirFrame{FrameKind::Link, f, now_, now_ + air_, s, h},
                          static_cast<std::int64_t>(s) * 65536 + h, static_cast<std::int64_t>(l.queue.front()));
    push(now_ + air_, Ev::TxEnd, static_cast<std::int64_t>(l.frame));
  }

  void link_end(Frame& f) {
    const StationId s = f.air.tx_snow;
    const StationId h = f.air.rx_snow;
    auto& l = links_[{s, h}];
    l.sending = false;
    if (f.peer_collision) {
      ++log_.link_collisions;
      l.waiting = true;
      push(now_ + backoff_us(cfg_.mac.bs_link_backoff_ms), Ev::LinkTry, s, h);
      return;
    }
    const std::size_t pkt = l.queue.front();
    const bool ok = !f.collided && survives(net_.pair_overlap[s][h]);
    if (!ok && l.tries < cfg_.mac.max_retries) {
      ++l.tries;
      l.waiting = true;
      push(now_ + backoff_us(cfg_.mac.bs_link_backoff_ms), Ev::LinkTry, s, h);
      return;
    }
    l.queue.pop_front();
    l.tries = 0;
    if (ok) bs_receive(h, pkt);
    else {
      ++log_.dropped_link;
      drop(pkt);
    }
    link_try(s, h);
  }

  void tx_end(std::size_t id) {
    end_frame(id);
    auto& f = frames_[id];
    if (f.air.kind == FrameKind::Uplink) uplink_end(f);
    else if (f.air.kind == FrameKind::Link) link_end(f);
  }

  // --- beacons --------------------------------------------------------------

  void beacon_start(StationId d) {
    if (outstanding_ == 0) return;
    const int per = net_.nodes_per_snow;
    for (int k = 0; k < per; ++k) {
      const std::size_t g = index(d, k);
      auto& nd = nodes_[g];
      if (!nd.p2p) continue;
      nd.beacon_ok = !nd.transmitting;
      if (nd.beacon_ok) {
        nd.beacon_listen = true;
        settle(g);
      }
    }
    auto& frames = beacon_frames_[d];
    frames.clear();
    std::map<std::uint32_t, std::size_t> by_slot;
    for (const SubcarrierId s : net_.node_pool[d]) {
      const std::size_t id = start_frame(AirFrame{FrameKind::Beacon, s, now_, now_ + air_, d, d}, -1, -1);
      frames.push_back(id);
      by_slot[s.index] = id;
    }
    auto& payload = beacon_payload_[d];
    payload.clear();
    for (int k = 0; k < per; ++k) {
      const std::size_t g = index(d, k);
      auto& nd = nodes_[g];
      if (nd.downlink.empty()) continue;
      if (cfg_.mac.node_hopping) pick_slot(nd);
      payload.push_back(BeaconPayload{g, nd.downlink.front(), by_slot.at(nd.slot.index)});
    }
    push(now_ + air_, Ev::BeaconEnd, d);
    push(now_ + period_, Ev::BeaconStart, d);
  }

  void beacon_end(StationId d) {
    for (std::size_t id : beacon_frames_[d]) end_frame(id);
    for (const auto& bp : beacon_payload_[d]) {
      auto& nd = nodes_[bp.node];
      const bool ok = nd.beacon_ok && nd.beacon_listen && !frames_[bp.frame].collided &&
                      survives(net_.snow_overlap[d]);
      if (ok) {
        nd.downlink.pop_front();
        nd.downlink_attempts = 0;
        ++log_.packets[bp.packet].hops;
        deliver(bp.packet);
      } else if (++nd.downlink_attempts > cfg_.mac.max_retries) {
        nd.downlink.pop_front();
        nd.downlink_attempts = 0;
        ++log_.dropped_downlink;
        drop(bp.packet);
      }
    }
    const int per = net_.nodes_per_snow;
    for (int k = 0; k < per; ++k) {
      const std::size_t g = index(d, k);
      auto& nd = nodes_[g];
      if (!nd.beacon_listen) continue;
      nd.beacon_listen = false;
      settle(g);
    }
  }

  const Network& net_;
  const SimConfig& cfg_;
  Rng rng_;
  TimeUs air_;
  TimeUs ack_;
  TimeUs period_;
  TimeUs now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
  std::size_t outstanding_ = 0;

  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::vector<Frame> frames_;
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> active_;
  std::vector<NodeRt> nodes_;
  std::vector<std::vector<StationId>> next_hop_;
  std::map<std::pair<StationId, StationId>, LinkDir> links_;
  std::map<StationId, std::vector<std::size_t>> beacon_frames_;
  std::map<StationId, std::vector<BeaconPayload>> beacon_payload_;
  SimLog log_;
};

}  // namespace

SimLog simulate(const Network& net, const SimConfig& cfg, const Workload& wl, std::uint64_t seed) {
  cfg.radio.validate();
  cfg.mac.validate();
  cfg.energy.validate();
  cfg.loss.validate();
  wl.validate(net.snow_count(), net.nodes_per_snow);
  if (cfg.mac.beacon_period_ms * 1000LL < 2 * cfg.radio.packet_airtime_us())
    throw SimError("mac: beacon period shorter than two packet airtimes");
  Engine engine(net, cfg, wl, seed);
  return engine.run();
}

RunMetrics run(const Network& net, const SimConfig& cfg, const Workload& wl, std::uint64_t seed) {
  return compute_metrics(simulate(net, cfg, wl, seed), cfg.energy);
}

}  // namespace snowtree
