#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace snowtree {

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One orthogonal subcarrier in the global numbering. The index is the
/// subcarrier's absolute frequency slot: lower edge / (omega * alpha).
struct SubcarrierId {
  std::uint32_t index = 0;

  constexpr auto operator<=>(const SubcarrierId&) const = default;
};

using SubcarrierSet = std::set<SubcarrierId>;
using StationId = std::uint32_t;

struct SpectrumBand {
  double start_khz = 0.0;
  double width_khz = 0.0;

  auto operator<=>(const SpectrumBand&) const = default;
};

/// Location label -> sorted, non-overlapping white-space bands.
using WhiteSpaceMap = std::map<std::string, std::vector<SpectrumBand>>;

struct SubcarrierParams {
  double omega_khz = 400.0;
  double alpha = 0.5;

  /// Slot pitch omega * alpha in kHz.
  double pitch_khz() const { return omega_khz * alpha; }

  /// Throws ModelError unless omega > 0 and 0 < alpha <= 0.5.
  void validate() const;

  bool operator==(const SubcarrierParams&) const = default;
};

struct BaseStation {
  StationId id = 0;
  std::string location;
  SubcarrierSet universe;  // Z_i
  int sigma = 1;           // minimum subcarrier count

  bool operator==(const BaseStation&) const = default;
};

/// Unordered station pair, always stored as (min, max).
struct StationPair {
  StationId a = 0;
  StationId b = 0;

  static StationPair of(StationId x, StationId y) {
    return x < y ? StationPair{x, y} : StationPair{y, x};
  }

  auto operator<=>(const StationPair&) const = default;
};

struct SnowTree {
  std::vector<BaseStation> stations;             // indexed by id
  std::vector<std::optional<StationId>> parent;  // root (0) has none
  std::vector<std::set<StationId>> interferers;  // I_i
  std::map<StationPair, int> phi;                // max common subcarriers

  std::size_t size() const { return stations.size(); }
  std::optional<int> phi_of(StationId i, StationId j) const;
  std::vector<StationId> children(StationId i) const;
  /// Number of edges between i and the root.
  std::size_t depth(StationId i) const;
  /// Station ids on the tree path from `from` to `to`, both ends included.
  std::vector<StationId> path(StationId from, StationId to) const;

  bool operator==(const SnowTree&) const = default;
};

struct SopInstance {
  SnowTree tree;
  SubcarrierParams params;

  bool operator==(const SopInstance&) const = default;
};

enum class ConstraintTag {
  Structural,  // X_i not a subset of Z_i, or missing station
  C1Lower,     // |X_i| < sigma_i
  C1Upper,     // |X_i| > |Z_i|
  C2Lower,     // |X_i ∩ X_p(i)| < 1
  C2Upper,     // |X_i ∩ X_p(i)| > phi
  C3Upper,     // |X_i ∩ X_j| > phi for a non-tree interfering pair
};

const char* to_string(ConstraintTag tag);
std::optional<ConstraintTag> constraint_tag_from_string(const std::string& s);

struct Violation {
  ConstraintTag tag = ConstraintTag::Structural;
  StationId station = 0;
  std::optional<StationId> other;
  long long observed = 0;
  long long bound = 0;

  bool operator==(const Violation&) const = default;
};

struct Assignment {
  std::vector<SubcarrierSet> sets;  // X_i, indexed by station id
  bool feasible = false;
  std::vector<Violation> violations;

  bool operator==(const Assignment&) const = default;
};

/// Subcarriers carved out of the given bands: per band,
/// max(0, floor(W / (omega * alpha)) - 1) slots starting at the band's
/// absolute slot index floor(start / (omega * alpha)).
SubcarrierSet derive_universe(const std::vector<SpectrumBand>& bands,
                              const SubcarrierParams& params);

/// Slot count for a single contiguous band of width W.
long long subcarrier_count(double width_khz, const SubcarrierParams& params);

/// All structural problems with the instance; empty means valid.
std::vector<std::string> validate_instance(const SopInstance& inst);

std::size_t scalability_metric(const Assignment& a);

std::size_t intersection_size(const SubcarrierSet& x, const SubcarrierSet& y);
SubcarrierSet intersection(const SubcarrierSet& x, const SubcarrierSet& y);

/// Incremental construction of a consistent SnowTree: interferer sets are
/// kept symmetric and tree links are always added as interferers.
class SnowTreeBuilder {
public:
  SnowTreeBuilder& params(SubcarrierParams p);
  StationId add_station(std::string location, SubcarrierSet universe, int sigma);
  /// Adds a tree link child -> parent with its phi; also marks them interferers.
  SnowTreeBuilder& link(StationId child, StationId parent, int phi);
  SnowTreeBuilder& interfere(StationId i, StationId j, int phi);
  SnowTreeBuilder& universe_from(const WhiteSpaceMap& ws);

  /// Throws ModelError listing all validation failures.
  SopInstance build() const;
  /// Returns the instance without validating it.
  SopInstance build_unchecked() const;

private:
  SopInstance inst_;
};

}  // namespace snowtree
