#include <sstream>

#include "io_detail.hpp"
#include "snowtree/io.hpp"

namespace snowtree {

using detail::parse_int;
using detail::parse_real;

bool Scenario::same_content(const Scenario& o) const {
  const auto& a = sim;
  const auto& b = o.sim;
  const bool radio = a.radio.subcarrier_khz == b.radio.subcarrier_khz &&
                     a.radio.spreading_factor == b.radio.spreading_factor &&
                     a.radio.bits_per_symbol == b.radio.bits_per_symbol && a.radio.packet_bytes == b.radio.packet_bytes &&
                     a.radio.ack_bytes == b.radio.ack_bytes && a.radio.node_tx_dbm == b.radio.node_tx_dbm &&
                     a.radio.bs_tx_dbm == b.radio.bs_tx_dbm && a.radio.rx_sensitivity_dbm == b.radio.rx_sensitivity_dbm;
  const bool mac = a.mac.initial_backoff_ms == b.mac.initial_backoff_ms &&
                   a.mac.congestion_backoff_ms == b.mac.congestion_backoff_ms &&
                   a.mac.bs_link_backoff_ms == b.mac.bs_link_backoff_ms &&
                   a.mac.beacon_period_ms == b.mac.beacon_period_ms && a.mac.max_retries == b.mac.max_retries &&
                   a.mac.node_hopping == b.mac.node_hopping;
  const bool energy =
      a.energy.tx_mw == b.energy.tx_mw && a.energy.rx_mw == b.energy.rx_mw && a.energy.sleep_mw == b.energy.sleep_mw;
  const bool loss = a.loss.mode == b.loss.mode && a.loss.curve == b.loss.curve;
  return instance_file == o.instance_file && instance == o.instance && algorithm == o.algorithm &&
         assignment_file == o.assignment_file && assignment == o.assignment && nodes_per_snow == o.nodes_per_snow &&
         seed == o.seed && seeds == o.seeds && radio && mac && energy && loss && a.horizon_us == b.horizon_us &&
         a.record_trace == b.record_trace && pattern == o.pattern && workload.flows == o.workload.flows;
}

Scenario parse_scenario(const std::string& text, const std::string& source, const std::filesystem::path& root) {
  const TextDocument doc = parse_sections(text, source);
  for (const auto& s : doc.sections)
    if (s.name != "scenario" && s.name != "radio" && s.name != "mac" && s.name != "energy" && s.name != "loss" &&
        s.name != "curve" && s.name != "workload" && s.name != "flows")
      doc.fail(s.number, "unknown section [" + s.name + "]");

  Scenario sc;
  sc.root = root;
  const auto* head = doc.find("scenario");
  if (!head) doc.fail(0, "missing [scenario]");
  detail::expect_pairs(doc, *head);
  int instance_line = 0, assignment_line = 0;
  for (const auto& l : head->lines) {
    if (l.key == "instance") {
      sc.instance_file = l.value;
      instance_line = l.number;
    } else if (l.key == "algorithm") {
      const auto a = algorithm_from_string(l.value);
      if (!a) doc.fail(l.number, "unknown algorithm '" + l.value + "'");
      sc.algorithm = a;
    } else if (l.key == "assignment") {
      sc.assignment_file = l.value;
      assignment_line = l.number;
    } else if (l.key == "nodes_per_snow") {
      sc.nodes_per_snow = parse_int(doc, l.number, l.value, "nodes_per_snow");
      if (sc.nodes_per_snow < 1) doc.fail(l.number, "nodes_per_snow must be at least 1");
    } else if (l.key == "seed") {
      sc.seed = detail::parse_integer<std::uint64_t>(doc, l.number, l.value, "seed");
    } else if (l.key == "seeds") {
      sc.seeds = parse_int(doc, l.number, l.value, "seeds");
      if (sc.seeds < 1) doc.fail(l.number, "seeds must be at least 1");
    } else if (l.key == "horizon_s") {
      const double h = parse_real(doc, l.number, l.value, "horizon_s");
      if (h <= 0) doc.fail(l.number, "horizon_s must be positive");
      sc.sim.horizon_us = static_cast<TimeUs>(h * 1e6);
    } else if (l.key == "trace") {
      sc.sim.record_trace = detail::parse_bool(doc, l.number, l.value, "trace");
    } else {
      doc.fail(l.number, "unknown key '" + l.key + "' in [scenario]");
    }
  }
  if (sc.instance_file.empty()) doc.fail(head->number, "missing instance");
  if (sc.algorithm.has_value() == !sc.assignment_file.empty())
    doc.fail(head->number, "give exactly one of 'algorithm' and 'assignment'");

  try {
    sc.instance = load_instance(root / sc.instance_file);
  } catch (const IoError& e) {
    doc.fail(instance_line, e.what());
  }
  if (!sc.assignment_file.empty()) {
    try {
      sc.assignment = load_assignment(root / sc.assignment_file, sc.instance.tree.size());
    } catch (const IoError& e) {
      doc.fail(assignment_line, e.what());
    }
  }

  auto& r = sc.sim.radio;
  if (const auto* s = doc.find("radio")) {
    detail::expect_pairs(doc, *s);
    for (const auto& l : s->lines) {
      if (l.key == "subcarrier_khz") r.subcarrier_khz = parse_real(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "spreading_factor") r.spreading_factor = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "bits_per_symbol") r.bits_per_symbol = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "packet_bytes") r.packet_bytes = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "ack_bytes") r.ack_bytes = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "node_tx_dbm") r.node_tx_dbm = parse_real(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "bs_tx_dbm") r.bs_tx_dbm = parse_real(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "rx_sensitivity_dbm") r.rx_sensitivity_dbm = parse_real(doc, l.number, l.value, l.key.c_str());
      else doc.fail(l.number, "unknown key '" + l.key + "' in [radio]");
    }
  }
  auto& m = sc.sim.mac;
  if (const auto* s = doc.find("mac")) {
    detail::expect_pairs(doc, *s);
    for (const auto& l : s->lines) {
      if (l.key == "initial_backoff_ms") m.initial_backoff_ms = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "congestion_backoff_ms") m.congestion_backoff_ms = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "bs_link_backoff_ms") m.bs_link_backoff_ms = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "beacon_period_ms") m.beacon_period_ms = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "max_retries") m.max_retries = parse_int(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "node_hopping") m.node_hopping = detail::parse_bool(doc, l.number, l.value, l.key.c_str());
      else doc.fail(l.number, "unknown key '" + l.key + "' in [mac]");
    }
  }
  auto& e = sc.sim.energy;
  if (const auto* s = doc.find("energy")) {
    detail::expect_pairs(doc, *s);
    for (const auto& l : s->lines) {
      if (l.key == "tx_mw") e.tx_mw = parse_real(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "rx_mw") e.rx_mw = parse_real(doc, l.number, l.value, l.key.c_str());
      else if (l.key == "sleep_mw") e.sleep_mw = parse_real(doc, l.number, l.value, l.key.c_str());
      else doc.fail(l.number, "unknown key '" + l.key + "' in [energy]");
    }
  }
  auto& loss = sc.sim.loss;
  if (const auto* s = doc.find("loss")) {
    detail::expect_pairs(doc, *s);
    for (const auto& l : s->lines) {
      if (l.key != "mode") doc.fail(l.number, "unknown key '" + l.key + "' in [loss]");
      const auto mode = loss_mode_from_string(l.value);
      if (!mode) doc.fail(l.number, "unknown loss mode '" + l.value + "'");
      loss.mode = *mode;
    }
  }
  if (const auto* s = doc.find("curve")) {
    detail::expect_rows(doc, *s);
    for (const auto& l : s->lines) {
      if (l.tokens.size() != 2) doc.fail(l.number, "expected 'overlap prr'");
      loss.curve.emplace_back(parse_real(doc, l.number, l.tokens[0], "overlap"),
                              parse_real(doc, l.number, l.tokens[1], "prr"));
    }
  }

  const auto* wl = doc.find("workload");
  const auto* fl = doc.find("flows");
  if ((wl != nullptr) == (fl != nullptr)) doc.fail(0, "give exactly one of [workload] and [flows]");
  if (wl) {
    detail::expect_pairs(doc, *wl);
    PeerAllPattern p;
    bool named = false;
    for (const auto& l : wl->lines) {
      if (l.key == "pattern") {
        if (l.value != "peer_all") doc.fail(l.number, "unknown workload pattern '" + l.value + "'");
        named = true;
      } else if (l.key == "packets") {
        p.packets = parse_int(doc, l.number, l.value, "packets");
      } else if (l.key == "sleep_min_ms") {
        p.sleep_min_ms = parse_int(doc, l.number, l.value, "sleep_min_ms");
      } else if (l.key == "sleep_max_ms") {
        p.sleep_max_ms = parse_int(doc, l.number, l.value, "sleep_max_ms");
      } else {
        doc.fail(l.number, "unknown key '" + l.key + "' in [workload]");
      }
    }
    if (!named) doc.fail(wl->number, "missing pattern");
    sc.pattern = p;
    sc.workload = Workload::peer_all(sc.instance.tree.size(), sc.nodes_per_snow, p.packets, p.sleep_min_ms,
                                     p.sleep_max_ms);
  } else {
    detail::expect_rows(doc, *fl);
    for (const auto& l : fl->lines) {
      if (l.tokens.size() != 7)
        doc.fail(l.number, "expected 'src_snow src_node dst_snow dst_node packets sleep_min_ms sleep_max_ms'");
      Flow f;
      f.src_snow = detail::parse_integer<StationId>(doc, l.number, l.tokens[0], "src_snow");
      f.src_node = parse_int(doc, l.number, l.tokens[1], "src_node");
      f.dst_snow = detail::parse_integer<StationId>(doc, l.number, l.tokens[2], "dst_snow");
      f.dst_node = l.tokens[3] == "bs" ? kBaseStationNode : parse_int(doc, l.number, l.tokens[3], "dst_node");
      f.packets = parse_int(doc, l.number, l.tokens[4], "packets");
      f.sleep_min_ms = parse_int(doc, l.number, l.tokens[5], "sleep_min_ms");
      f.sleep_max_ms = parse_int(doc, l.number, l.tokens[6], "sleep_max_ms");
      sc.workload.flows.push_back(f);
    }
  }

  try {
    sc.sim.radio.validate();
    sc.sim.mac.validate();
    sc.sim.energy.validate();
    sc.sim.loss.validate();
    sc.workload.validate(sc.instance.tree.size(), sc.nodes_per_snow);
  } catch (const SimError& ex) {
    doc.fail(0, ex.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.string(), path.parent_path());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "instance = " << s.instance_file << "\n";
  if (s.algorithm) out << "algorithm = " << to_string(*s.algorithm) << "\n";
  else out << "assignment = " << s.assignment_file << "\n";
  out << "nodes_per_snow = " << s.nodes_per_snow << "\n";
  out << "seed = " << s.seed << "\n";
  out << "seeds = " << s.seeds << "\n";
  out << "horizon_s = " << format_double(static_cast<double>(s.sim.horizon_us) / 1e6) << "\n";
  out << "trace = " << (s.sim.record_trace ? "true" : "false") << "\n";
  const auto& r = s.sim.radio;
  out << "\n[radio]\n";
  out << "subcarrier_khz = " << format_double(r.subcarrier_khz) << "\n";
  out << "spreading_factor = " << r.spreading_factor << "\n";
  out << "bits_per_symbol = " << r.bits_per_symbol << "\n";
  out << "packet_bytes = " << r.packet_bytes << "\n";
  out << "ack_bytes = " << r.ack_bytes << "\n";
  out << "node_tx_dbm = " << format_double(r.node_tx_dbm) << "\n";
  out << "bs_tx_dbm = " << format_double(r.bs_tx_dbm) << "\n";
  out << "rx_sensitivity_dbm = " << format_double(r.rx_sensitivity_dbm) << "\n";
  const auto& m = s.sim.mac;
  out << "\n[mac]\n";
  out << "initial_backoff_ms = " << m.initial_backoff_ms << "\n";
  out << "congestion_backoff_ms = " << m.congestion_backoff_ms << "\n";
  out << "bs_link_backoff_ms = " << m.bs_link_backoff_ms << "\n";
  out << "beacon_period_ms = " << m.beacon_period_ms << "\n";
  out << "max_retries = " << m.max_retries << "\n";
  out << "node_hopping = " << (m.node_hopping ? "true" : "false") << "\n";
  const auto& e = s.sim.energy;
  out << "\n[energy]\n";
  out << "tx_mw = " << format_double(e.tx_mw) << "\n";
  out << "rx_mw = " << format_double(e.rx_mw) << "\n";
  out << "sleep_mw = " << format_double(e.sleep_mw) << "\n";
  out << "\n[loss]\nmode = " << to_string(s.sim.loss.mode) << "\n";
  if (!s.sim.loss.curve.empty()) {
    out << "\n[curve]\n# overlap prr\n";
    for (const auto& [x, y] : s.sim.loss.curve) out << format_double(x) << " " << format_double(y) << "\n";
  }
  if (s.pattern) {
    out << "\n[workload]\npattern = peer_all\n";
    out << "packets = " << s.pattern->packets << "\n";
    out << "sleep_min_ms = " << s.pattern->sleep_min_ms << "\n";
    out << "sleep_max_ms = " << s.pattern->sleep_max_ms << "\n";
  } else {
    out << "\n[flows]\n# src_snow src_node dst_snow dst_node packets sleep_min_ms sleep_max_ms\n";
    for (const auto& f : s.workload.flows)
      out << f.src_snow << " " << f.src_node << " " << f.dst_snow << " "
          << (f.dst_node == kBaseStationNode ? std::string("bs") : std::to_string(f.dst_node)) << " " << f.packets
          << " " << f.sleep_min_ms << " " << f.sleep_max_ms << "\n";
  }
  return out.str();
}

SolverReport scenario_assignment(const Scenario& s, std::optional<Algorithm> algo, std::uint64_t seed) {
  if (!algo) algo = s.algorithm;
  if (!algo) {
    SolverReport r;
    r.algorithm = Algorithm::Direct;
    r.assignment = check_feasibility(s.instance, *s.assignment);
    r.metric = scalability_metric(r.assignment);
    return r;
  }
  return solve(s.instance, *algo, seed);
}

}  // namespace snowtree
