#include <algorithm>
#include <set>
#include <sstream>

#include "io_detail.hpp"
#include "snowtree/io.hpp"

namespace snowtree {

using detail::parse_int;
using detail::parse_real;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Rows of a comma-separated file with '#' comments; returns (line, cells).
std::vector<std::pair<int, std::vector<std::string>>> csv_rows(const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    rows.emplace_back(number, split_csv(line));
  }
  return rows;
}

std::string slots_row(const SubcarrierSet& s) {
  std::string out;
  for (const auto& id : s) out += " " + std::to_string(id.index);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ChannelTable ChannelTable::us_tv() {
  ChannelTable t;
  const auto add = [&](int ch, double start_mhz) { t.channels[ch] = SpectrumBand{start_mhz * 1000.0, 6000.0}; };
  for (int ch = 2; ch <= 4; ++ch) add(ch, 54.0 + 6.0 * (ch - 2));
  for (int ch = 5; ch <= 6; ++ch) add(ch, 76.0 + 6.0 * (ch - 5));
  for (int ch = 7; ch <= 13; ++ch) add(ch, 174.0 + 6.0 * (ch - 7));
  for (int ch = 14; ch <= 69; ++ch) add(ch, 470.0 + 6.0 * (ch - 14));
  return t;
}

ChannelTable ChannelTable::parse(const std::string& text, const std::string& source) {
  TextDocument doc;
  doc.source = source;
  const auto rows = csv_rows(text);
  if (rows.empty()) doc.fail(0, "empty channel table");
  const std::vector<std::string> header{"channel", "start_khz", "width_khz"};
  if (rows.front().second != header) doc.fail(rows.front().first, "expected header channel,start_khz,width_khz");
  ChannelTable t;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != 3) doc.fail(line, "expected 3 columns, got " + std::to_string(cells.size()));
    const int ch = parse_int(doc, line, cells[0], "channel");
    const SpectrumBand b{parse_real(doc, line, cells[1], "start_khz"), parse_real(doc, line, cells[2], "width_khz")};
    if (b.start_khz < 0 || b.width_khz <= 0) doc.fail(line, "band must have start >= 0 and width > 0");
    if (!t.channels.emplace(ch, b).second) doc.fail(line, "channel " + cells[0] + " listed twice");
  }
  return t;
}

ChannelTable ChannelTable::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

WhiteSpaceMap parse_whitespace(const std::string& text, const std::string& source, const ChannelTable& table,
                               std::vector<std::string>* warnings) {
  TextDocument doc;
  doc.source = source;
  const auto rows = csv_rows(text);
  if (rows.empty()) doc.fail(0, "empty white-space file");

  const auto& [hline, header] = rows.front();
  int col_loc = -1, col_ch = -1, col_start = -1, col_width = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    int* slot = h == "location"                              ? &col_loc
                : (h == "channel" || h == "channel_index") ? &col_ch
                : h == "start_khz"                         ? &col_start
                : h == "width_khz"                         ? &col_width
                                                           : nullptr;
    if (!slot) doc.fail(hline, "unknown column '" + h + "'");
    if (*slot >= 0) doc.fail(hline, "column '" + h + "' given twice");
    *slot = static_cast<int>(c);
  }
  if (col_loc < 0) doc.fail(hline, "missing column 'location'");
  const bool by_channel = col_ch >= 0;
  if (by_channel == (col_start >= 0 || col_width >= 0) || (!by_channel && (col_start < 0 || col_width < 0)))
    doc.fail(hline, "need either a 'channel' column or both 'start_khz' and 'width_khz'");

  WhiteSpaceMap ws;
  std::map<std::pair<std::string, SpectrumBand>, int> first_seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != header.size())
      doc.fail(line, "expected " + std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
    const std::string& loc = cells[static_cast<std::size_t>(col_loc)];
    if (loc.empty() || loc.find_first_of(" \t") != std::string::npos)
      doc.fail(line, "location must be a non-empty word");
    SpectrumBand band;
    if (by_channel) {
      std::string cell = cells[static_cast<std::size_t>(col_ch)];
      if (cell.rfind("channel", 0) == 0) cell = trim(cell.substr(7));
      const int ch = parse_int(doc, line, cell, "channel");
      const auto it = table.channels.find(ch);
      if (it == table.channels.end()) doc.fail(line, "channel " + std::to_string(ch) + " not in the channel table");
      band = it->second;
    } else {
      band.start_khz = parse_real(doc, line, cells[static_cast<std::size_t>(col_start)], "start_khz");
      band.width_khz = parse_real(doc, line, cells[static_cast<std::size_t>(col_width)], "width_khz");
      if (band.start_khz < 0 || band.width_khz <= 0) doc.fail(line, "band must have start >= 0 and width > 0");
    }
    const auto [it, fresh] = first_seen.emplace(std::make_pair(loc, band), line);
    if (!fresh) {
      if (warnings)
        warnings->push_back(source + ":" + std::to_string(line) + ": duplicate of line " +
                            std::to_string(it->second) + " ignored");
      continue;
    }
    ws[loc].push_back(band);
  }
  for (auto& [loc, bands] : ws) {
    std::sort(bands.begin(), bands.end());
    for (std::size_t k = 1; k < bands.size(); ++k)
      if (bands[k].start_khz < bands[k - 1].start_khz + bands[k - 1].width_khz)
        doc.fail(first_seen.at({loc, bands[k]}), "band overlaps another band of location " + loc);
  }
  return ws;
}

WhiteSpaceMap load_whitespace(const std::filesystem::path& path, const ChannelTable& table,
                              std::vector<std::string>* warnings) {
  return parse_whitespace(read_file(path), path.string(), table, warnings);
}

// ---------------------------------------------------------------------------

SopInstance parse_instance(const std::string& text, const std::string& source, const std::filesystem::path& base_dir,
                           const WhiteSpaceMap* ws) {
  const TextDocument doc = parse_sections(text, source);
  for (const auto& s : doc.sections)
    if (s.name != "params" && s.name != "stations" && s.name != "tree" && s.name != "interferers" &&
        s.name != "universe")
      doc.fail(s.number, "unknown section [" + s.name + "]");

  SubcarrierParams params;
  std::optional<WhiteSpaceMap> own_ws;
  if (const auto* p = doc.find("params")) {
    detail::expect_pairs(doc, *p);
    std::string ws_file, table_file;
    int ws_line = 0;
    for (const auto& l : p->lines) {
      if (l.key == "omega_khz") params.omega_khz = parse_real(doc, l.number, l.value, "omega_khz");
      else if (l.key == "alpha") params.alpha = parse_real(doc, l.number, l.value, "alpha");
      else if (l.key == "whitespace") ws_file = l.value, ws_line = l.number;
      else if (l.key == "channel_table") table_file = l.value;
      else doc.fail(l.number, "unknown key '" + l.key + "' in [params]");
    }
    try {
      params.validate();
    } catch (const ModelError& e) {
      doc.fail(p->number, e.what());
    }
    if (!ws_file.empty()) {
      try {
        const ChannelTable table =
            table_file.empty() ? ChannelTable::us_tv() : ChannelTable::load(base_dir / table_file);
        own_ws = load_whitespace(base_dir / ws_file, table);
      } catch (const IoError& e) {
        doc.fail(ws_line, e.what());
      }
    }
  }
  const WhiteSpaceMap* lookup = own_ws ? &*own_ws : ws;

  const auto* st = doc.find("stations");
  if (!st || st->lines.empty()) doc.fail(0, "missing or empty [stations]");
  detail::expect_rows(doc, *st);
  const std::size_t n = st->lines.size();
  std::vector<const TextLine*> rows(n, nullptr);
  for (const auto& l : st->lines) {
    if (l.tokens.size() != 3) doc.fail(l.number, "expected 'id location sigma'");
    const auto id = detail::parse_integer<StationId>(doc, l.number, l.tokens[0], "station id");
    if (id >= n) doc.fail(l.number, "station id " + l.tokens[0] + " outside 0.." + std::to_string(n - 1));
    if (rows[id]) doc.fail(l.number, "station id " + l.tokens[0] + " listed twice");
    rows[id] = &l;
  }

  std::map<StationId, SubcarrierSet> explicit_z;
  if (const auto* u = doc.find("universe")) {
    detail::expect_rows(doc, *u);
    for (const auto& l : u->lines) {
      const auto id = detail::parse_integer<StationId>(doc, l.number, l.tokens[0], "station id");
      if (id >= n) doc.fail(l.number, "unknown station " + l.tokens[0]);
      if (explicit_z.count(id)) doc.fail(l.number, "universe of station " + l.tokens[0] + " given twice");
      SubcarrierSet z;
      for (std::size_t k = 1; k < l.tokens.size(); ++k)
        z.insert(SubcarrierId{detail::parse_integer<std::uint32_t>(doc, l.number, l.tokens[k], "subcarrier")});
      explicit_z[id] = std::move(z);
    }
  }

  SnowTreeBuilder b;
  b.params(params);
  for (StationId id = 0; id < n; ++id) {
    const auto& l = *rows[id];
    const std::string& loc = l.tokens[1];
    const int sigma = parse_int(doc, l.number, l.tokens[2], "sigma");
    SubcarrierSet z;
    if (auto it = explicit_z.find(id); it != explicit_z.end()) {
      z = it->second;
    } else {
      if (!lookup) doc.fail(l.number, "station " + std::to_string(id) + " has no universe and no white-space map");
      const auto it2 = lookup->find(loc);
      if (it2 == lookup->end()) doc.fail(l.number, "unknown location '" + loc + "'");
      z = derive_universe(it2->second, params);
    }
    b.add_station(loc, std::move(z), sigma);
  }

  const auto read_pair = [&](const TextLine& l, const char* shape) {
    if (l.tokens.size() != 3) doc.fail(l.number, std::string("expected '") + shape + "'");
    const auto i = detail::parse_integer<StationId>(doc, l.number, l.tokens[0], "station id");
    const auto j = detail::parse_integer<StationId>(doc, l.number, l.tokens[1], "station id");
    const int phi = parse_int(doc, l.number, l.tokens[2], "phi");
    if (i >= n || j >= n) doc.fail(l.number, "unknown station in pair " + l.tokens[0] + " " + l.tokens[1]);
    if (i == j) doc.fail(l.number, "station paired with itself");
    return std::make_tuple(i, j, phi);
  };
  std::set<StationPair> pairs;
  if (const auto* t = doc.find("tree")) {
    detail::expect_rows(doc, *t);
    std::set<StationId> children;
    for (const auto& l : t->lines) {
      const auto [c, p, phi] = read_pair(l, "child parent phi");
      if (!children.insert(c).second) doc.fail(l.number, "station " + std::to_string(c) + " has two parents");
      if (!pairs.insert(StationPair::of(c, p)).second) doc.fail(l.number, "pair listed twice");
      b.link(c, p, phi);
    }
  }
  if (const auto* f = doc.find("interferers")) {
    detail::expect_rows(doc, *f);
    for (const auto& l : f->lines) {
      const auto [i, j, phi] = read_pair(l, "i j phi");
      if (!pairs.insert(StationPair::of(i, j)).second) doc.fail(l.number, "pair listed twice");
      b.interfere(i, j, phi);
    }
  }

  SopInstance inst = b.build_unchecked();
  const auto errors = validate_instance(inst);
  if (!errors.empty()) {
    std::string msg = source + ": invalid instance";
    for (const auto& e : errors) msg += "\n  " + e;
    throw IoError(msg);
  }
  return inst;
}

SopInstance load_instance(const std::filesystem::path& path, const WhiteSpaceMap* ws) {
  return parse_instance(read_file(path), path.string(), path.parent_path(), ws);
}

std::string format_instance(const SopInstance& inst) {
  const auto& t = inst.tree;
  std::ostringstream out;
  out << "[params]\n";
  out << "omega_khz = " << format_double(inst.params.omega_khz) << "\n";
  out << "alpha = " << format_double(inst.params.alpha) << "\n";
  out << "\n[stations]\n# id location sigma\n";
  for (const auto& s : t.stations) {
    if (s.location.empty() || s.location.find_first_of(" \t#=[") != std::string::npos)
      throw IoError("station " + std::to_string(s.id) + ": location '" + s.location + "' cannot be written");
    out << s.id << " " << s.location << " " << s.sigma << "\n";
  }
  out << "\n[tree]\n# child parent phi\n";
  for (StationId c = 0; c < t.size(); ++c)
    if (t.parent[c]) out << c << " " << *t.parent[c] << " " << t.phi_of(c, *t.parent[c]).value_or(0) << "\n";
  out << "\n[interferers]\n# i j phi\n";
  for (const auto& [pair, phi] : t.phi) {
    const bool tree_link = (t.parent[pair.a] && *t.parent[pair.a] == pair.b) ||
                           (t.parent[pair.b] && *t.parent[pair.b] == pair.a);
    if (!tree_link) out << pair.a << " " << pair.b << " " << phi << "\n";
  }
  out << "\n[universe]\n# id subcarrier...\n";
  for (const auto& s : t.stations) out << s.id << slots_row(s.universe) << "\n";
  return out.str();
}

void save_instance(const SopInstance& inst, const std::filesystem::path& path) {
  write_file(path, format_instance(inst));
}

// ---------------------------------------------------------------------------

std::string format_violations(const std::vector<Violation>& vs) {
  std::ostringstream out;
  for (const auto& v : vs)
    out << to_string(v.tag) << " " << v.station << " " << (v.other ? std::to_string(*v.other) : "-") << " "
        << v.observed << " " << v.bound << "\n";
  return out.str();
}

std::string format_report(const SolverReport& r) {
  std::ostringstream out;
  out << "[report]\n";
  out << "algorithm = " << to_string(r.algorithm) << "\n";
  if (r.seed) out << "seed = " << *r.seed << "\n";
  out << "metric = " << r.metric << "\n";
  out << "feasible = " << (r.assignment.feasible ? "true" : "false") << "\n";
  out << "no_feasible = " << (r.no_feasible ? "true" : "false") << "\n";
  out << "runtime_us = " << r.runtime.count() << "\n";
  out << "\n[assignment]\n# id subcarrier...\n";
  for (std::size_t i = 0; i < r.assignment.sets.size(); ++i) out << i << slots_row(r.assignment.sets[i]) << "\n";
  out << "\n[violations]\n# tag station other observed bound\n" << format_violations(r.assignment.violations);
  if (r.trace) {
    out << "\n[trace]\n";
    out << "step2_ran = " << (r.trace->step2_ran ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < r.trace->step1_sets.size(); ++i)
      out << "step1 " << i << slots_row(r.trace->step1_sets[i]) << "\n";
    for (std::size_t i = 0; i < r.trace->step2_sets.size(); ++i)
      out << "step2 " << i << slots_row(r.trace->step2_sets[i]) << "\n";
  }
  return out.str();
}

namespace {

// Rows "id slot..." into a vector of sets, ids dense from 0.
std::vector<SubcarrierSet> read_sets(const TextDocument& doc, const std::vector<const TextLine*>& lines,
                                     std::size_t first_token, std::optional<std::size_t> stations) {
  std::map<std::size_t, SubcarrierSet> by_id;
  for (const auto* l : lines) {
    if (l->tokens.size() <= first_token) doc.fail(l->number, "missing station id");
    const auto id = detail::parse_integer<std::size_t>(doc, l->number, l->tokens[first_token], "station id");
    if (stations && id >= *stations) doc.fail(l->number, "unknown station " + l->tokens[first_token]);
    if (by_id.count(id)) doc.fail(l->number, "station " + l->tokens[first_token] + " listed twice");
    SubcarrierSet s;
    for (std::size_t k = first_token + 1; k < l->tokens.size(); ++k)
      s.insert(SubcarrierId{detail::parse_integer<std::uint32_t>(doc, l->number, l->tokens[k], "subcarrier")});
    by_id[id] = std::move(s);
  }
  const std::size_t count = stations ? *stations : (by_id.empty() ? 0 : by_id.rbegin()->first + 1);
  std::vector<SubcarrierSet> sets(count);
  for (auto& [id, s] : by_id) sets[id] = std::move(s);
  return sets;
}

std::vector<const TextLine*> all_rows(const TextDocument& doc, const TextSection& s) {
  detail::expect_rows(doc, s);
  std::vector<const TextLine*> out;
  for (const auto& l : s.lines) out.push_back(&l);
  return out;
}

}  // namespace

SolverReport parse_report(const std::string& text, const std::string& source) {
  const TextDocument doc = parse_sections(text, source);
  SolverReport r;
  const auto* head = doc.find("report");
  if (!head) doc.fail(0, "missing [report]");
  detail::expect_pairs(doc, *head);
  bool have_algo = false;
  for (const auto& l : head->lines) {
    if (l.key == "algorithm") {
      const auto a = algorithm_from_string(l.value);
      if (!a) doc.fail(l.number, "unknown algorithm '" + l.value + "'");
      r.algorithm = *a;
      have_algo = true;
    } else if (l.key == "seed") {
      r.seed = detail::parse_integer<std::uint64_t>(doc, l.number, l.value, "seed");
    } else if (l.key == "metric") {
      r.metric = detail::parse_integer<std::size_t>(doc, l.number, l.value, "metric");
    } else if (l.key == "feasible") {
      r.assignment.feasible = detail::parse_bool(doc, l.number, l.value, "feasible");
    } else if (l.key == "no_feasible") {
      r.no_feasible = detail::parse_bool(doc, l.number, l.value, "no_feasible");
    } else if (l.key == "runtime_us") {
      r.runtime = std::chrono::microseconds(detail::parse_integer<long long>(doc, l.number, l.value, "runtime_us"));
    } else {
      doc.fail(l.number, "unknown key '" + l.key + "' in [report]");
    }
  }
  if (!have_algo) doc.fail(head->number, "missing algorithm");

  if (const auto* a = doc.find("assignment")) r.assignment.sets = read_sets(doc, all_rows(doc, *a), 0, std::nullopt);
  if (const auto* v = doc.find("violations")) {
    for (const auto* l : all_rows(doc, *v)) {
      if (l->tokens.size() != 5) doc.fail(l->number, "expected 'tag station other observed bound'");
      Violation x;
      const auto tag = constraint_tag_from_string(l->tokens[0]);
      if (!tag) doc.fail(l->number, "unknown constraint tag '" + l->tokens[0] + "'");
      x.tag = *tag;
      x.station = detail::parse_integer<StationId>(doc, l->number, l->tokens[1], "station");
      if (l->tokens[2] != "-") x.other = detail::parse_integer<StationId>(doc, l->number, l->tokens[2], "station");
      x.observed = detail::parse_integer<long long>(doc, l->number, l->tokens[3], "observed");
      x.bound = detail::parse_integer<long long>(doc, l->number, l->tokens[4], "bound");
      r.assignment.violations.push_back(x);
    }
  }
  if (const auto* t = doc.find("trace")) {
    ApproxTrace tr;
    std::vector<const TextLine*> s1, s2;
    for (const auto& l : t->lines) {
      if (l.is_pair()) {
        if (l.key != "step2_ran") doc.fail(l.number, "unknown key '" + l.key + "' in [trace]");
        tr.step2_ran = detail::parse_bool(doc, l.number, l.value, "step2_ran");
      } else if (l.tokens[0] == "step1") {
        s1.push_back(&l);
      } else if (l.tokens[0] == "step2") {
        s2.push_back(&l);
      } else {
        doc.fail(l.number, "expected step1 or step2 row");
      }
    }
    tr.step1_sets = read_sets(doc, s1, 1, std::nullopt);
    tr.step2_sets = read_sets(doc, s2, 1, std::nullopt);
    r.trace = std::move(tr);
  }
  return r;
}

void save_report(const SolverReport& r, const std::filesystem::path& path) { write_file(path, format_report(r)); }

SolverReport load_report(const std::filesystem::path& path) { return parse_report(read_file(path), path.string()); }

Assignment parse_assignment(const std::string& text, const std::string& source, std::size_t stations) {
  const TextDocument doc = parse_sections(text, source);
  const auto* a = doc.find("assignment");
  if (!a) doc.fail(0, "missing [assignment]");
  Assignment out;
  out.sets = read_sets(doc, all_rows(doc, *a), 0, stations);
  return out;
}

Assignment load_assignment(const std::filesystem::path& path, std::size_t stations) {
  return parse_assignment(read_file(path), path.string(), stations);
}

}  // namespace snowtree
