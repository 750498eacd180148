#pragma once

#include <random>
#include <vector>

#include "stageflow/oracles.hpp"
#include "stageflow/reductions.hpp"
#include "support.hpp"

namespace testing {

struct InvarianceStats {
  int instances = 0;
  int split2 = 0;
  int split3 = 0;
  int failures = 0;
};

// Origin 1, source 2, sink n, group 3..n-1 with random two-way group links of
// cost 1 and group degree at most 3.
inline stageflow::TspInstance random_layout(std::mt19937_64& rng, int n, std::vector<int>& degree) {
  using stageflow::NodeId;
  stageflow::TspInstance t(n, 200);
  t.set_cost(NodeId{1}, NodeId{2}, 1);
  t.set_cost(NodeId{n}, NodeId{1}, 1);
  std::vector<std::pair<int, int>> pairs;
  for (int g = 3; g < n; ++g) {
    t.set_cost(NodeId{2}, NodeId{g}, 1);
    t.set_cost(NodeId{g}, NodeId{n}, 1);
    for (int h = g + 1; h < n; ++h) pairs.emplace_back(g, h);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  degree.assign(n + 1, 0);
  std::bernoulli_distribution keep(0.6);
  for (auto [a, b] : pairs)
    if (degree[a] < 3 && degree[b] < 3 && keep(rng)) {
      t.set_cost(NodeId{a}, NodeId{b}, 1);
      t.set_cost(NodeId{b}, NodeId{a}, 1);
      ++degree[a];
      ++degree[b];
    }
  return t;
}

inline int min_large_by_enumeration(const stageflow::TspInstance& t) {
  int best = t.size() + 1;
  for_each_tour(t.size(), [&](const std::vector<int>& order) {
    best = std::min(best, stageflow::large_arc_count(t, to_nodes(order)));
  });
  return best;
}

// Splits one random group node of degree 2 or 3 per instance and compares both
// sides by exhaustive enumeration:
//  - Split2 raises the optimum by exactly the internal cost, Split3 by one or
//    two internal arcs;
//  - the least number of large arcs is unchanged, and every optimal tour of the
//    split instance uses exactly that many;
//  - every optimal tour of the split instance contracts, for some choice of
//    kept replacement, to an optimal tour of the original.
inline InvarianceStats check_split_invariance(std::uint64_t seed, int wanted) {
  using namespace stageflow;
  std::mt19937_64 rng(seed);
  InvarianceStats st;
  while (st.instances < wanted) {
    const int n = 5 + static_cast<int>(rng() % 4);
    std::vector<int> degree;
    auto t = random_layout(rng, n, degree);
    std::vector<int> candidates;
    for (int g = 3; g < n; ++g)
      if (degree[g] == 2 || degree[g] == 3) candidates.push_back(g);
    if (candidates.empty()) continue;
    const int v = candidates[rng() % candidates.size()];
    const SplitKind kind = degree[v] == 2 ? SplitKind::Split2 : SplitKind::Split3;
    const Cost internal = kind == SplitKind::Split2 ? 1 : 2;
    auto e = split_node(t, NodeId{v}, kind, internal, GroupRoles::standard(n));
    ++st.instances;
    (kind == SplitKind::Split2 ? st.split2 : st.split3)++;

    auto before = brute_force(t);
    auto after = brute_force(e.instance, true);
    bool ok = true;
    if (kind == SplitKind::Split2) ok &= after.optimum == before.optimum + internal;
    else ok &= after.optimum >= before.optimum + internal && after.optimum <= before.optimum + 2 * internal;

    const int k_before = min_large_by_enumeration(t);
    ok &= min_large_by_enumeration(e.instance) == k_before;
    for (const auto& order : after.optimal) {
      ok &= large_arc_count(e.instance, to_nodes(order)) == k_before;
      bool some_keep = false;
      for (int keep_at = 0; keep_at < replacement_count(kind); ++keep_at) {
        std::vector<int> keep(n, 0);
        keep[v - 1] = keep_at;
        some_keep |= tour_value(t, contract_tour(to_nodes(order), e, keep)) == before.optimum;
      }
      ok &= some_keep;
    }
    if (!ok) ++st.failures;
  }
  return st;
}

}  // namespace testing
