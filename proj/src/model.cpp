#include "snowtree/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace snowtree {

void SubcarrierParams::validate() const {
  if (!(omega_khz > 0.0)) throw ModelError("omega_khz must be positive");
  if (!(alpha > 0.0) || alpha > 0.5) throw ModelError("alpha must be in (0, 0.5]");
}

std::optional<int> SnowTree::phi_of(StationId i, StationId j) const {
  auto it = phi.find(StationPair::of(i, j));
  if (it == phi.end()) return std::nullopt;
  return it->second;
}

std::vector<StationId> SnowTree::children(StationId i) const {
  std::vector<StationId> out;
  for (StationId c = 0; c < parent.size(); ++c)
    if (parent[c] && *parent[c] == i) out.push_back(c);
  return out;
}

std::size_t SnowTree::depth(StationId i) const {
  std::size_t d = 0;
  while (parent.at(i)) {
    i = *parent[i];
    if (++d > parent.size()) throw ModelError("not a tree");
  }
  return d;
}

std::vector<StationId> SnowTree::path(StationId from, StationId to) const {
  std::vector<StationId> up{from};
  std::vector<StationId> down{to};
  std::size_t da = depth(from);
  std::size_t db = depth(to);
  StationId a = from;
  StationId b = to;
  while (da > db) { a = *parent[a]; up.push_back(a); --da; }
  while (db > da) { b = *parent[b]; down.push_back(b); --db; }
  while (a != b) {
    a = *parent[a];
    b = *parent[b];
    up.push_back(a);
    down.push_back(b);
  }
  down.pop_back();  // meeting point already in `up`
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

const char* to_string(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::Structural: return "structural";
    case ConstraintTag::C1Lower: return "C1-lower";
    case ConstraintTag::C1Upper: return "C1-upper";
    case ConstraintTag::C2Lower: return "C2-lower";
    case ConstraintTag::C2Upper: return "C2-upper";
    case ConstraintTag::C3Upper: return "C3-upper";
  }
  return "?";
}

std::optional<ConstraintTag> constraint_tag_from_string(const std::string& s) {
  for (auto t : {ConstraintTag::Structural, ConstraintTag::C1Lower, ConstraintTag::C1Upper,
                 ConstraintTag::C2Lower, ConstraintTag::C2Upper, ConstraintTag::C3Upper})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

long long subcarrier_count(double width_khz, const SubcarrierParams& params) {
  params.validate();
  const double pitch = params.pitch_khz();
  const double ratio = width_khz / pitch;
  // Tolerate representation error on exact multiples (e.g. 0.3 * 400).
  const long long slots = static_cast<long long>(std::floor(ratio + 1e-9 * std::max(1.0, ratio)));
  return std::max(0LL, slots - 1);
}

SubcarrierSet derive_universe(const std::vector<SpectrumBand>& bands,
                              const SubcarrierParams& params) {
  params.validate();
  const double pitch = params.pitch_khz();
  SubcarrierSet out;
  for (const auto& band : bands) {
    if (!(band.width_khz > 0.0)) throw ModelError("band width must be positive");
    const long long n = subcarrier_count(band.width_khz, params);
    const double q = band.start_khz / pitch;
    const auto base = static_cast<long long>(std::floor(q + 1e-9 * std::max(1.0, std::abs(q))));
    for (long long k = 0; k < n; ++k)
      out.insert(SubcarrierId{static_cast<std::uint32_t>(base + k)});
  }
  return out;
}

std::size_t intersection_size(const SubcarrierSet& x, const SubcarrierSet& y) {
  std::size_t n = 0;
  auto a = x.begin();
  auto b = y.begin();
  while (a != x.end() && b != y.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else { ++n; ++a; ++b; }
  }
  return n;
}

SubcarrierSet intersection(const SubcarrierSet& x, const SubcarrierSet& y) {
  SubcarrierSet out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  return out;
}

std::size_t scalability_metric(const Assignment& a) {
  std::size_t total = 0;
  for (const auto& s : a.sets) total += s.size();
  return total;
}

namespace {

std::string pair_name(StationId i, StationId j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

}  // namespace

std::vector<std::string> validate_instance(const SopInstance& inst) {
  std::vector<std::string> errs;
  const auto& t = inst.tree;
  const std::size_t n = t.stations.size();

  try {
    inst.params.validate();
  } catch (const ModelError& e) {
    errs.emplace_back(e.what());
  }
  if (n == 0) {
    errs.emplace_back("instance has no stations");
    return errs;
  }
  if (t.parent.size() != n || t.interferers.size() != n) {
    errs.emplace_back("parent/interferer tables do not match station count");
    return errs;
  }

  for (StationId i = 0; i < n; ++i) {
    const auto& bs = t.stations[i];
    if (bs.id != i) errs.push_back("station at position " + std::to_string(i) + " has id " + std::to_string(bs.id));
    if (bs.sigma < 0) errs.push_back("station " + std::to_string(i) + ": sigma is negative");
    if (bs.sigma > static_cast<long long>(bs.universe.size()))
      errs.push_back("station " + std::to_string(i) + ": sigma " + std::to_string(bs.sigma) +
                     " exceeds |Z| = " + std::to_string(bs.universe.size()));
  }

  // Tree shape: root 0 has no parent, everyone else has one, no cycles.
  bool tree_ok = true;
  if (t.parent[0]) {
    errs.emplace_back("root station 0 must not have a parent");
    tree_ok = false;
  }
  for (StationId i = 1; i < n; ++i) {
    if (!t.parent[i]) {
      errs.push_back("station " + std::to_string(i) + " has no parent");
      tree_ok = false;
    } else if (*t.parent[i] >= n) {
      errs.push_back("station " + std::to_string(i) + " has unknown parent " + std::to_string(*t.parent[i]));
      tree_ok = false;
    }
  }
  if (tree_ok) {
    for (StationId i = 0; i < n && tree_ok; ++i) {
      StationId cur = i;
      for (std::size_t steps = 0; t.parent[cur]; ++steps) {
        if (steps > n) {
          errs.emplace_back("not a tree: parent links contain a cycle through station " + std::to_string(i));
          tree_ok = false;
          break;
        }
        cur = *t.parent[cur];
      }
    }
  }

  for (StationId i = 0; i < n; ++i) {
    for (StationId j : t.interferers[i]) {
      if (j >= n) {
        errs.push_back("station " + std::to_string(i) + " lists unknown interferer " + std::to_string(j));
        continue;
      }
      if (j == i) errs.push_back("station " + std::to_string(i) + " lists itself as interferer");
      if (!t.interferers[j].count(i))
        errs.push_back("interferer relation not symmetric for pair " + pair_name(i, j));
      if (i < j && !t.phi_of(i, j)) errs.push_back("phi missing for interfering pair " + pair_name(i, j));
    }
    if (t.parent[i] && *t.parent[i] < n) {
      const StationId p = *t.parent[i];
      if (!t.interferers[i].count(p))
        errs.push_back("parent " + std::to_string(p) + " not in interferer set of station " + std::to_string(i));
      if (!t.interferers[p].count(i))
        errs.push_back("child " + std::to_string(i) + " not in interferer set of station " + std::to_string(p));
      auto ph = t.phi_of(i, p);
      if (ph && *ph < 1) errs.push_back("phi for tree link " + pair_name(i, p) + " must be at least 1");
    }
  }
  for (const auto& [pair, value] : t.phi) {
    if (value < 0) errs.push_back("phi for pair " + pair_name(pair.a, pair.b) + " is negative");
    if (pair.a >= n || pair.b >= n || !t.interferers[pair.a].count(pair.b))
      errs.push_back("phi given for non-interfering pair " + pair_name(pair.a, pair.b));
  }
  return errs;
}

SnowTreeBuilder& SnowTreeBuilder::params(SubcarrierParams p) {
  inst_.params = p;
  return *this;
}

StationId SnowTreeBuilder::add_station(std::string location, SubcarrierSet universe, int sigma) {
  auto& t = inst_.tree;
  const auto id = static_cast<StationId>(t.stations.size());
  t.stations.push_back(BaseStation{id, std::move(location), std::move(universe), sigma});
  t.parent.emplace_back();
  t.interferers.emplace_back();
  return id;
}

SnowTreeBuilder& SnowTreeBuilder::link(StationId child, StationId parent, int phi) {
  auto& t = inst_.tree;
  t.parent.at(child) = parent;
  return interfere(child, parent, phi);
}

SnowTreeBuilder& SnowTreeBuilder::interfere(StationId i, StationId j, int phi) {
  auto& t = inst_.tree;
  t.interferers.at(i).insert(j);
  t.interferers.at(j).insert(i);
  t.phi[StationPair::of(i, j)] = phi;
  return *this;
}

SnowTreeBuilder& SnowTreeBuilder::universe_from(const WhiteSpaceMap& ws) {
  for (auto& bs : inst_.tree.stations) {
    auto it = ws.find(bs.location);
    if (it == ws.end()) throw ModelError("unknown location '" + bs.location + "'");
    bs.universe = derive_universe(it->second, inst_.params);
  }
  return *this;
}

SopInstance SnowTreeBuilder::build() const {
  auto errs = validate_instance(inst_);
  if (!errs.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ModelError(msg);
  }
  return inst_;
}

SopInstance SnowTreeBuilder::build_unchecked() const { return inst_; }

}  // namespace snowtree
