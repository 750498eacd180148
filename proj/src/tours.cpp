#include <algorithm>
#include <limits>

#include "stageflow/error.hpp"
#include "stageflow/oracles.hpp"

namespace stageflow {

Cost tour_value(const TspInstance& t, const std::vector<NodeId>& order) {
  Cost total = 0;
  for (std::size_t k = 0; k < order.size(); ++k) total += t.cost(order[k], order[(k + 1) % order.size()]);
  return total;
}

int large_arc_count(const TspInstance& t, const std::vector<NodeId>& order) {
  int count = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (t.is_large(order[k], order[(k + 1) % order.size()])) ++count;
  return count;
}

bool is_tour(const TspInstance& t, const std::vector<NodeId>& order) {
  if (static_cast<int>(order.size()) != t.size() || order.empty() || order.front() != t.origin()) return false;
  std::vector<bool> seen(static_cast<std::size_t>(t.size()) + 1, false);
  for (NodeId v : order) {
    if (!t.contains(v) || seen[v.value]) return false;
    seen[v.value] = true;
  }
  return true;
}

TourResult make_tour_result(const TspInstance& t, std::vector<NodeId> order) {
  if (!is_tour(t, order)) throw PreconditionError("not a tour of the instance");
  TourResult r;
  r.value = tour_value(t, order);
  r.large_arc_count = large_arc_count(t, order);
  r.order = std::move(order);
  return r;
}

Cost cheapest_out_arc_bound(const TspInstance& t) {
  Cost total = 0;
  for (int i = 1; i <= t.size(); ++i) {
    Cost best = std::numeric_limits<Cost>::max();
    for (int j = 1; j <= t.size(); ++j)
      if (i != j) best = std::min(best, t.cost(NodeId{i}, NodeId{j}));
    if (t.size() > 1) total += best;
  }
  return total;
}

TspSolution exact_tsp(const TspInstance& t, Budget budget, SolveMethod method, int threads) {
  if (t.size() < 3) throw PreconditionError("exact TSP needs at least 3 nodes");
  if (method == SolveMethod::HeldKarp || (method == SolveMethod::Auto && t.size() <= kHeldKarpMaxNodes))
    return held_karp(t, budget);
  return branch_and_bound(t, budget, threads);
}

const char* to_string(HcpAnswer answer) {
  switch (answer) {
    case HcpAnswer::Yes:
      return "YES";
    case HcpAnswer::No:
      return "NO";
    case HcpAnswer::Timeout:
      return "TIMEOUT";
  }
  return "?";
}

const char* to_string(SolveStatus status) { return status == SolveStatus::Optimal ? "OPTIMAL" : "TIMEOUT"; }

}  // namespace stageflow
