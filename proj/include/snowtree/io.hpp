#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowtree/model.hpp"
#include "snowtree/simulator.hpp"
#include "snowtree/solver.hpp"

namespace snowtree {

/// Parse or validation failure; what() starts with "source:line: " when a
/// line is known.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Sectioned text: "[name]" headers, "key = value" or whitespace-separated
// rows, '#' comments.

struct TextLine {
  int number = 0;
  std::string key;                  // set for key = value lines
  std::string value;
  std::vector<std::string> tokens;  // set for rows
  bool is_pair() const { return !key.empty(); }
};

struct TextSection {
  std::string name;
  int number = 0;
  std::vector<TextLine> lines;
};

struct TextDocument {
  std::string source;
  std::vector<TextSection> sections;

  const TextSection* find(const std::string& name) const;
  [[noreturn]] void fail(int line, const std::string& msg) const;
};

TextDocument parse_sections(const std::string& text, const std::string& source);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Shortest text that reads back to the same double.
std::string format_double(double v);
/// Fixed-point with `decimals` digits, independent of the C locale.
std::string format_fixed(double v, int decimals = 6);

// ---------------------------------------------------------------------------
// White spaces

/// TV channel number -> band. us_tv() is the US 6 MHz plan:
/// 2-4 at 54 MHz, 5-6 at 76 MHz, 7-13 at 174 MHz, 14-69 at 470 MHz.
struct ChannelTable {
  std::map<int, SpectrumBand> channels;

  static ChannelTable us_tv();
  /// CSV "channel,start_khz,width_khz".
  static ChannelTable parse(const std::string& text, const std::string& source);
  static ChannelTable load(const std::filesystem::path& path);
};

/// CSV with a header naming the columns: "location" plus either "channel"
/// or "start_khz,width_khz". Duplicate rows are dropped with a warning.
WhiteSpaceMap parse_whitespace(const std::string& text, const std::string& source,
                               const ChannelTable& table = ChannelTable::us_tv(),
                               std::vector<std::string>* warnings = nullptr);
WhiteSpaceMap load_whitespace(const std::filesystem::path& path,
                              const ChannelTable& table = ChannelTable::us_tv(),
                              std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Instances

/// Sections: [params] omega_khz, alpha, optional whitespace (and
/// channel_table) paths relative to `base_dir`; [stations] "id location
/// sigma"; [tree] "child parent phi"; [interferers] "i j phi";
/// [universe] "id slot..." overriding the white-space lookup.
SopInstance parse_instance(const std::string& text, const std::string& source,
                           const std::filesystem::path& base_dir = {},
                           const WhiteSpaceMap* ws = nullptr);
SopInstance load_instance(const std::filesystem::path& path, const WhiteSpaceMap* ws = nullptr);
/// Self-contained form: every universe is written explicitly.
std::string format_instance(const SopInstance& inst);
void save_instance(const SopInstance& inst, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Solver reports and assignments

std::string format_report(const SolverReport& r);
SolverReport parse_report(const std::string& text, const std::string& source);
void save_report(const SolverReport& r, const std::filesystem::path& path);
SolverReport load_report(const std::filesystem::path& path);

/// Reads the [assignment] section ("id slot...") of a report or a bare file.
/// Stations without a row get an empty set.
Assignment parse_assignment(const std::string& text, const std::string& source, std::size_t stations);
Assignment load_assignment(const std::filesystem::path& path, std::size_t stations);

std::string format_violations(const std::vector<Violation>& v);

// ---------------------------------------------------------------------------
// Scenarios

struct PeerAllPattern {
  int packets = 1;
  int sleep_min_ms = 0;
  int sleep_max_ms = 50;

  bool operator==(const PeerAllPattern&) const = default;
};

struct Scenario {
  std::filesystem::path root;        // directory of the scenario file
  std::string instance_file;         // as written, relative to root
  SopInstance instance;
  std::optional<Algorithm> algorithm;
  std::string assignment_file;       // used when algorithm is unset
  std::optional<Assignment> assignment;
  int nodes_per_snow = 1;
  std::uint64_t seed = 1;
  int seeds = 1;                     // runs per algorithm in a sweep
  SimConfig sim;
  std::optional<PeerAllPattern> pattern;
  Workload workload;                 // expanded from pattern when set

  /// Equality of everything loaded, ignoring the root directory.
  bool same_content(const Scenario& other) const;
};

/// Sections: [scenario], [radio], [mac], [energy], [loss], [curve]
/// ("overlap prr" rows), [workload] (pattern = peer_all) or [flows]
/// ("src_snow src_node dst_snow dst_node|bs packets sleep_min sleep_max").
Scenario parse_scenario(const std::string& text, const std::string& source, const std::filesystem::path& root);
Scenario load_scenario(const std::filesystem::path& path);
std::string format_scenario(const Scenario& s);

/// Assignment the scenario asks for: explicit, or solved with the given
/// algorithm and seed.
SolverReport scenario_assignment(const Scenario& s, std::optional<Algorithm> algo, std::uint64_t seed);

// ---------------------------------------------------------------------------
// CSV results

/// flow_id,src_snow,src_node,dst_snow,dst_node,level,offered,delivered,prr,
/// latency_mean_ms,latency_p50_ms,latency_p95_ms,src_tx_mj,src_rx_mj,
/// src_sleep_mj,src_total_mj
std::string flows_csv(const RunMetrics& m);
/// snow,node,tx_mj,rx_mj,sleep_mj,total_mj
std::string nodes_csv(const RunMetrics& m);
/// group,offered,delivered,prr,latency_mean_ms,energy_per_node_mj
std::string groups_csv(const RunMetrics& m);

/// One (algorithm, group) row of a sweep, averaged over seeds.
struct ComparisonRow {
  std::string algorithm;
  std::string group;
  int runs = 0;
  double metric = 0;
  double feasible_fraction = 0;
  double prr = 0;
  double latency_mean_ms = 0;
  double energy_per_node_mj = 0;
};

/// algorithm,group,runs,metric,feasible_fraction,prr,latency_mean_ms,
/// energy_per_node_mj. Rows are sorted: algorithms by global PRR
/// (descending, then name), groups as "global" then levels ascending.
std::string comparison_csv(std::vector<ComparisonRow> rows);

}  // namespace snowtree
