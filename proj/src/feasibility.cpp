#include <algorithm>

#include "snowtree/solver.hpp"

namespace snowtree {

Assignment check_feasibility(const SopInstance& inst, Assignment a) {
  const auto& t = inst.tree;
  const std::size_t n = t.size();
  a.violations.clear();

  if (a.sets.size() != n) {
    a.violations.push_back(Violation{ConstraintTag::Structural, 0, std::nullopt,
                                     static_cast<long long>(a.sets.size()), static_cast<long long>(n)});
    a.feasible = false;
    return a;
  }

  for (StationId i = 0; i < n; ++i) {
    const auto& x = a.sets[i];
    const auto& z = t.stations[i].universe;
    const auto inside = static_cast<long long>(intersection_size(x, z));
    const auto size = static_cast<long long>(x.size());
    if (inside != size)
      a.violations.push_back(Violation{ConstraintTag::Structural, i, std::nullopt, size - inside, 0});
    if (size < t.stations[i].sigma)
      a.violations.push_back(Violation{ConstraintTag::C1Lower, i, std::nullopt, size, t.stations[i].sigma});
    if (size > static_cast<long long>(z.size()))
      a.violations.push_back(Violation{ConstraintTag::C1Upper, i, std::nullopt, size,
                                       static_cast<long long>(z.size())});
  }

  for (StationId i = 1; i < n; ++i) {
    if (!t.parent[i]) continue;
    const StationId p = *t.parent[i];
    const auto common = static_cast<long long>(intersection_size(a.sets[i], a.sets[p]));
    const long long phi = t.phi_of(i, p).value_or(0);
    if (common < 1) a.violations.push_back(Violation{ConstraintTag::C2Lower, i, p, common, 1});
    if (common > phi) a.violations.push_back(Violation{ConstraintTag::C2Upper, i, p, common, phi});
  }

  for (StationId i = 0; i < n; ++i) {
    for (StationId j : t.interferers[i]) {
      if (j <= i) continue;
      const bool tree_link = (t.parent[i] && *t.parent[i] == j) || (t.parent[j] && *t.parent[j] == i);
      if (tree_link) continue;
      const auto common = static_cast<long long>(intersection_size(a.sets[i], a.sets[j]));
      const long long phi = t.phi_of(i, j).value_or(0);
      if (common > phi) a.violations.push_back(Violation{ConstraintTag::C3Upper, i, j, common, phi});
    }
  }

  a.feasible = a.violations.empty();
  return a;
}

}  // namespace snowtree
