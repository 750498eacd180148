#include <doctest.h>

#include <random>
#include <set>

#include "stageflow/error.hpp"
#include "stageflow/oracles.hpp"
#include "stageflow/reductions.hpp"
#include "support.hpp"

using namespace stageflow;

namespace {

HcpInstance random_graph(std::mt19937_64& rng, int n, double density) {
  HcpInstance g(n);
  std::bernoulli_distribution arc(density);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j && arc(rng)) g.add_arc(NodeId{i}, NodeId{j});
  return g;
}

bool brute_hamiltonian(const HcpInstance& g) {
  bool found = false;
  testing::for_each_tour(g.size(), [&](const std::vector<int>& order) {
    if (found) return;
    bool ok = true;
    for (std::size_t k = 0; k < order.size() && ok; ++k)
      ok = g.has_arc(NodeId{order[k]}, NodeId{order[(k + 1) % order.size()]});
    found = ok;
  });
  return found;
}

}  // namespace

TEST_CASE("tiny instances") {
  TspInstance t(3, 200);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) t.set_cost(NodeId{i}, NodeId{j}, 1);
  auto sol = exact_tsp(t);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.tour->value == 3);
  CHECK(sol.tour->large_arc_count == 0);
  auto count = count_optimal_tours(t);
  CHECK(count.directed == 2);
  CHECK(count.undirected == 1);
  CHECK(count.rotated_assignments == 6);

  TspInstance four(4, 200);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      if (i != j) four.set_cost(NodeId{i}, NodeId{j}, 7);
  CHECK(count_optimal_tours(four).directed == 6);
  CHECK(count_optimal_tours(four).undirected == 3);

  CHECK_THROWS_AS(exact_tsp(TspInstance(2)), PreconditionError);
  CHECK_THROWS_AS(held_karp(TspInstance(26)), PreconditionError);
  CHECK_THROWS_AS(make_tour_result(t, {NodeId{1}, NodeId{1}, NodeId{2}}), PreconditionError);
}

TEST_CASE("Held-Karp, branch and bound and enumeration agree") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 60; ++round) {
    const int n = 3 + round % 7;  // 3..9
    auto t = testing::random_instance(rng, n, round % 2 ? 3 : 40);
    auto brute = testing::brute_force(t, true);
    auto hk = held_karp(t);
    auto bb = branch_and_bound(t);
    REQUIRE(hk.tour);
    REQUIRE(bb.tour);
    CHECK(hk.tour->value == brute.optimum);
    CHECK(bb.tour->value == brute.optimum);
    // both break ties towards the lexicographically first optimal order
    CHECK(testing::to_ints(hk.tour->order) == brute.optimal.front());
    CHECK(bb.tour->order == hk.tour->order);
    CHECK(bb.tour->value >= cheapest_out_arc_bound(t));

    auto count = count_optimal_tours(t);
    CHECK(count.directed == brute.count);
    std::set<std::vector<int>> optimal(brute.optimal.begin(), brute.optimal.end());
    std::uint64_t undirected = 0;
    for (const auto& o : brute.optimal) {
      std::vector<int> rev{1};
      rev.insert(rev.end(), o.rbegin(), o.rend() - 1);
      if (!optimal.count(rev) || o <= rev) ++undirected;
    }
    CHECK(count.undirected == undirected);
    CHECK(count.rotated_assignments == brute.count * static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("larger instances: DP and branch and bound up to 12 nodes") {
  std::mt19937_64 rng(99);
  for (int n = 10; n <= 12; ++n)
    for (int round = 0; round < 3; ++round) {
      auto t = testing::random_instance(rng, n, 30);
      auto hk = held_karp(t);
      auto bb1 = branch_and_bound(t, {}, 1);
      auto bb3 = branch_and_bound(t, {}, 3);
      REQUIRE(bb1.tour);
      REQUIRE(bb3.tour);
      CHECK(hk.tour->value == bb1.tour->value);
      CHECK(bb1.tour->order == hk.tour->order);
      CHECK(bb3.tour->order == bb1.tour->order);
      CHECK(exact_tsp(t, {}, SolveMethod::BranchAndBound).tour->value == hk.tour->value);
    }
}

TEST_CASE("branch and bound honours its budget") {
  auto t = canonical_counterexample();
  auto sol = branch_and_bound(t, Budget(std::chrono::milliseconds(200)));
  CHECK(sol.status == SolveStatus::Timeout);
  CHECK_FALSE(sol.tour);
  REQUIRE(sol.incumbent);
  CHECK(is_tour(t, sol.incumbent->order));
  CHECK(sol.incumbent->value == tour_value(t, sol.incumbent->order));
}

TEST_CASE("least number of large arcs") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    const int n = 4 + round % 5;
    auto g = random_graph(rng, n, 0.35);
    auto t = hcp_to_tsp(g, 1, 50);
    int best = n;
    testing::for_each_tour(n, [&](const std::vector<int>& o) {
      best = std::min(best, large_arc_count(t, testing::to_nodes(o)));
    });
    CHECK(min_large_arcs(t) == best);
  }
}

TEST_CASE("Hamiltonian cycle search") {
  HcpInstance cycle(3);
  cycle.add_arc(NodeId{1}, NodeId{2});
  cycle.add_arc(NodeId{2}, NodeId{3});
  cycle.add_arc(NodeId{3}, NodeId{1});
  auto yes = hamiltonian_cycle_exists(cycle);
  CHECK(yes.answer == HcpAnswer::Yes);
  CHECK(yes.cycle == std::vector<NodeId>{NodeId{1}, NodeId{2}, NodeId{3}});

  // 4-cycle missing its closing arc, plus a chord that does not help
  HcpInstance broken(4);
  broken.add_arc(NodeId{1}, NodeId{2});
  broken.add_arc(NodeId{2}, NodeId{3});
  broken.add_arc(NodeId{3}, NodeId{4});
  broken.add_arc(NodeId{2}, NodeId{4});
  CHECK(brute_hamiltonian(broken) == false);
  CHECK(hamiltonian_cycle_exists(broken).answer == HcpAnswer::No);

  std::mt19937_64 rng(5);
  for (int round = 0; round < 120; ++round) {
    const int n = 3 + round % 7;
    auto g = random_graph(rng, n, 0.25 + 0.05 * (round % 6));
    auto r = hamiltonian_cycle_exists(g);
    REQUIRE(r.answer != HcpAnswer::Timeout);
    CHECK((r.answer == HcpAnswer::Yes) == brute_hamiltonian(g));
    auto t = hcp_to_tsp(g, 1, 100);
    auto opt = exact_tsp(t).tour;
    CHECK((opt->large_arc_count == 0) == (r.answer == HcpAnswer::Yes));
    if (r.answer == HcpAnswer::Yes) {
      REQUIRE(is_tour(t, r.cycle));
      CHECK(tour_value(t, r.cycle) == n);
    }
  }

  HcpInstance big(65);
  CHECK_THROWS_AS(hamiltonian_cycle_exists(big), PreconditionError);
}

TEST_CASE("seed graph has no Hamiltonian cycle") {
  auto r = hamiltonian_cycle_exists(canonical_hcp_seed());
  CHECK(r.answer == HcpAnswer::No);
  CHECK(r.cycle.empty());
}
