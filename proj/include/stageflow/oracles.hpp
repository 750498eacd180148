#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stageflow/graph.hpp"

namespace stageflow {

// Wall-clock allowance for an exhaustive search. Default-constructed budgets
// never expire.
class Budget {
 public:
  Budget() = default;
  explicit Budget(std::chrono::milliseconds limit)
      : deadline_(std::chrono::steady_clock::now() + limit) {}
  static Budget seconds(double s) {
    return Budget(std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0)));
  }

  bool expired() const { return deadline_ && std::chrono::steady_clock::now() >= *deadline_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

struct TourResult {
  std::vector<NodeId> order;  // starts at the origin, closing arc implicit
  Cost value = 0;
  int large_arc_count = 0;
};

Cost tour_value(const TspInstance& t, const std::vector<NodeId>& order);
int large_arc_count(const TspInstance& t, const std::vector<NodeId>& order);
// Every node exactly once, first entry is the origin.
bool is_tour(const TspInstance& t, const std::vector<NodeId>& order);
TourResult make_tour_result(const TspInstance& t, std::vector<NodeId> order);

enum class SolveStatus { Optimal, Timeout };

struct TspSolution {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<TourResult> tour;       // proven optimal when status == Optimal
  std::optional<TourResult> incumbent;  // best tour seen before a timeout
  std::string method;
  std::uint64_t nodes_explored = 0;
};

enum class SolveMethod { Auto, HeldKarp, BranchAndBound };

inline constexpr int kHeldKarpMaxNodes = 25;

// Ties are broken towards the lexicographically smallest visiting order, so
// both methods return the same tour on the same instance.
TspSolution exact_tsp(const TspInstance& t, Budget budget = {}, SolveMethod method = SolveMethod::Auto,
                      int threads = 1);
TspSolution held_karp(const TspInstance& t, Budget budget = {});
TspSolution branch_and_bound(const TspInstance& t, Budget budget = {}, int threads = 1);

// Sum over nodes of the cheapest outgoing arc.
Cost cheapest_out_arc_bound(const TspInstance& t);

struct TourCount {
  SolveStatus status = SolveStatus::Timeout;
  Cost optimum = 0;
  // Fixed origin, each direction counted separately.
  std::uint64_t directed = 0;
  // A tour and its reverse counted once when both are optimal.
  std::uint64_t undirected = 0;
  // Staged variable assignments when any node may sit at stage 1: every
  // rotation of a directed tour is a distinct assignment.
  std::uint64_t rotated_assignments = 0;
  bool overflow = false;
};

TourCount count_optimal_tours(const TspInstance& t, Budget budget = {});

enum class HcpAnswer { Yes, No, Timeout };

struct HcpResult {
  HcpAnswer answer = HcpAnswer::Timeout;
  std::vector<NodeId> cycle;  // witness for Yes, starting at node 1
  std::uint64_t nodes_explored = 0;
};

inline constexpr int kHamiltonianMaxNodes = 64;

HcpResult hamiltonian_cycle_exists(const HcpInstance& graph, Budget budget = {});

// Least number of large arcs over all tours, by Held-Karp on 0/1 costs.
std::optional<int> min_large_arcs(const TspInstance& t, Budget budget = {});

const char* to_string(HcpAnswer answer);
const char* to_string(SolveStatus status);

}  // namespace stageflow
