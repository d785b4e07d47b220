#include <doctest.h>

#include <algorithm>
#include <vector>

#include "snowtree/rng.hpp"
#include "snowtree/solver.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace snowtree;
using snowtree::oracle::brute_force_opt;
using snowtree::testing::random_instance;

namespace {

SubcarrierSet ids(std::initializer_list<std::uint32_t> v) {
  SubcarrierSet s;
  for (auto x : v) s.insert(SubcarrierId{x});
  return s;
}

SopInstance two_bs(int sigma, int phi) {
  SnowTreeBuilder b;
  b.add_station("A", ids({1, 2, 3, 4}), sigma);
  b.add_station("B", ids({1, 2, 3, 4}), sigma);
  b.link(1, 0, phi);
  return b.build();
}

bool has(const Assignment& a, ConstraintTag tag) {
  return std::any_of(a.violations.begin(), a.violations.end(), [&](const Violation& v) { return v.tag == tag; });
}

}  // namespace

TEST_CASE("direct assignment on the worked instance violates the parent bound") {
  const auto r = solve_direct(two_bs(1, 1));
  CHECK(r.metric == 8);
  CHECK_FALSE(r.assignment.feasible);
  CHECK(has(r.assignment, ConstraintTag::C2Upper));
}

TEST_CASE("empty assignment violates both lower bounds") {
  Assignment a;
  a.sets = {ids({}), ids({})};
  const auto checked = check_feasibility(two_bs(1, 1), a);
  CHECK_FALSE(checked.feasible);
  CHECK(has(checked, ConstraintTag::C1Lower));
  CHECK(has(checked, ConstraintTag::C2Lower));
}

TEST_CASE("subcarrier outside the universe is a structural violation") {
  Assignment a;
  a.sets = {ids({1, 9}), ids({1})};
  const auto checked = check_feasibility(two_bs(1, 1), a);
  CHECK(has(checked, ConstraintTag::Structural));
  Assignment short_a;
  short_a.sets = {ids({1})};
  CHECK(has(check_feasibility(two_bs(1, 1), short_a), ConstraintTag::Structural));
}

TEST_CASE("non-tree interferers are bounded by phi") {
  SnowTreeBuilder b;
  b.add_station("A", ids({1, 2, 3}), 1);
  b.add_station("B", ids({1, 2, 3}), 1);
  b.add_station("C", ids({1, 2, 3}), 1);
  b.link(1, 0, 3).link(2, 0, 3).interfere(1, 2, 1);
  const auto inst = b.build();
  Assignment a;
  a.sets = {ids({1, 2, 3}), ids({1, 2}), ids({1, 2})};
  const auto checked = check_feasibility(inst, a);
  CHECK(has(checked, ConstraintTag::C3Upper));
  a.sets = {ids({1, 2, 3}), ids({1, 2}), ids({2, 3})};
  CHECK(check_feasibility(inst, a).feasible);
}

TEST_CASE("greedy reproduces the hand trace") {
  const auto r = solve_greedy(two_bs(1, 1));
  CHECK(r.assignment.sets[0] == ids({2, 4}));
  CHECK(r.assignment.sets[1] == ids({1, 3, 4}));
  CHECK(r.metric == 5);
  CHECK(r.assignment.feasible);
}

TEST_CASE("greedy keeps a lone root whole") {
  SnowTreeBuilder b;
  b.add_station("A", ids({1, 2, 3}), 3);
  const auto r = solve_greedy(b.build());
  CHECK(r.assignment.sets[0] == ids({1, 2, 3}));
  CHECK(r.assignment.feasible);
}

TEST_CASE("greedy reports infeasibility when sigma blocks every removal") {
  const auto r = solve_greedy(two_bs(4, 1));
  CHECK_FALSE(r.assignment.feasible);
  CHECK(has(r.assignment, ConstraintTag::C2Upper));
  CHECK(r.metric == 8);
}

TEST_CASE("greedy restores a common subcarrier for tree links") {
  // phi = 0 on a non-tree pair strips the child; the link is then repaired.
  SnowTreeBuilder b;
  b.add_station("A", ids({1, 2}), 0);
  b.add_station("B", ids({1, 2}), 0);
  b.add_station("C", ids({1, 2}), 0);
  b.link(1, 0, 1).link(2, 1, 1).interfere(0, 2, 0);
  const auto r = solve_greedy(b.build());
  for (StationId c : {1U, 2U}) {
    const auto p = *b.build().tree.parent[c];
    CHECK(intersection_size(r.assignment.sets[c], r.assignment.sets[p]) >= 1);
  }
}

TEST_CASE("greedy is deterministic") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 4, 6);
    CHECK(solve_greedy(inst).same_result(solve_greedy(inst)));
  }
}

TEST_CASE("approx is reproducible for a seed and keeps its trace") {
  const auto inst = two_bs(0, 4);
  const auto a = solve_approx(inst, 11);
  const auto b = solve_approx(inst, 11);
  CHECK(a.same_result(b));
  REQUIRE(a.trace);
  CHECK_FALSE(a.trace->step2_ran);
  for (StationId i = 0; i < 2; ++i) CHECK(a.assignment.sets[i] == a.trace->step1_sets[i]);
}

TEST_CASE("approx step 2 draws only from what step 1 left") {
  const auto inst = two_bs(4, 4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = solve_approx(inst, seed);
    REQUIRE(r.trace);
    CHECK(r.trace->step2_ran);
    for (StationId i = 0; i < 2; ++i) {
      CHECK(intersection_size(r.trace->step1_sets[i], r.trace->step2_sets[i]) == 0);
      CHECK(r.assignment.sets[i].size() == r.trace->step1_sets[i].size() + r.trace->step2_sets[i].size());
    }
  }
}

TEST_CASE("approx marginal sizes: half without step 2, three quarters with it") {
  SnowTreeBuilder b0, b1;
  SubcarrierSet z;
  for (std::uint32_t k = 0; k < 40; ++k) z.insert(SubcarrierId{k});
  b0.add_station("A", z, 0);
  b1.add_station("A", z, 40);
  const auto off = b0.build();
  const auto on = b1.build();
  double sum_off = 0, sum_on = 0;
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    sum_off += static_cast<double>(solve_approx(off, static_cast<std::uint64_t>(s)).metric);
    sum_on += static_cast<double>(solve_approx(on, static_cast<std::uint64_t>(s)).metric);
  }
  CHECK(sum_off / runs / 40.0 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sum_on / runs / 40.0 == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("pairwise overlap with both steps matches exact enumeration of the coins") {
  // Oracle: four independent fair coins per shared subcarrier (step 1 and step 2
  // for each station). The subcarrier is in X_i iff c1_i or c2_i.
  int hits = 0;
  for (int mask = 0; mask < 16; ++mask) {
    const bool in_i = (mask & 1) || (mask & 2);
    const bool in_j = (mask & 4) || (mask & 8);
    hits += in_i && in_j;
  }
  CHECK(hits == 9);  // 9/16

  SnowTreeBuilder b;
  SubcarrierSet z;
  for (std::uint32_t k = 0; k < 32; ++k) z.insert(SubcarrierId{k});
  b.add_station("A", z, 32);
  b.add_station("B", z, 32);
  b.link(1, 0, 32);
  const auto inst = b.build();
  double sum = 0;
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    const auto r = solve_approx(inst, static_cast<std::uint64_t>(s));
    sum += static_cast<double>(intersection_size(r.assignment.sets[0], r.assignment.sets[1])) / 32.0;
  }
  CHECK(sum / runs == doctest::Approx(9.0 / 16.0).epsilon(0.02));
}

TEST_CASE("exact matches an independent brute force") {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto inst = random_instance(rng, n, 5);
    if (!validate_instance(inst).empty()) continue;
    const auto r = solve_exact(inst);
    const long long ref = brute_force_opt(inst);
    if (ref < 0) {
      CHECK(r.no_feasible);
    } else {
      CHECK_FALSE(r.no_feasible);
      CHECK(r.assignment.feasible);
      CHECK(static_cast<long long>(r.metric) == ref);
    }
  }
}

TEST_CASE("exact on the worked instance finds 5, and greedy is optimal there") {
  const auto inst = two_bs(1, 1);
  const auto r = solve_exact(inst);
  CHECK(r.metric == 5);
  CHECK(r.assignment.feasible);
  CHECK(brute_force_opt(inst) == 5);
  CHECK(solve_greedy(inst).metric <= r.metric);
}

TEST_CASE("exact reports when nothing is feasible") {
  // Both children must share subcarrier 1 with the root but may not share it with each other.
  SnowTreeBuilder b;
  b.add_station("A", ids({1}), 0);
  b.add_station("B", ids({1}), 0);
  b.add_station("C", ids({1}), 0);
  b.link(1, 0, 1).link(2, 0, 1).interfere(1, 2, 0);
  const auto r = solve_exact(b.build());
  CHECK(r.no_feasible);
  CHECK_FALSE(r.assignment.feasible);
}

TEST_CASE("exact on a single station returns the universe") {
  SnowTreeBuilder b;
  b.add_station("A", ids({3, 5, 7}), 1);
  const auto r = solve_exact(b.build());
  CHECK(r.assignment.sets[0] == ids({3, 5, 7}));
}

TEST_CASE("exact refuses instances past its caps") {
  SnowTreeBuilder b;
  for (int i = 0; i < 5; ++i) b.add_station("S" + std::to_string(i), ids({1, 2}), 1);
  for (StationId i = 1; i < 5; ++i) b.link(i, 0, 1);
  CHECK_THROWS_AS(solve_exact(b.build()), InstanceTooLarge);
  CHECK_NOTHROW(solve_exact(b.build(), ExactLimits{5, 10}));

  SnowTreeBuilder wide;
  SubcarrierSet z;
  for (std::uint32_t k = 0; k < 11; ++k) z.insert(SubcarrierId{k});
  wide.add_station("A", z, 1);
  CHECK_THROWS_AS(solve_exact(wide.build()), InstanceTooLarge);
}

TEST_CASE("algorithm names round-trip") {
  for (auto a : {Algorithm::Greedy, Algorithm::Approx, Algorithm::Exact, Algorithm::Direct})
    CHECK(algorithm_from_string(to_string(a)) == a);
  CHECK_FALSE(algorithm_from_string("simplex"));
}
