#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stageflow/error.hpp"
#include "stageflow/oracles.hpp"

namespace stageflow {

namespace {

// Completion table over the non-origin nodes: best[mask][v] is the cheapest
// path that starts at v, visits exactly `mask` (v included) and then returns
// to the origin. Built from the tail end so that the lexicographically first
// optimal tour can be read off greedily from the front.
template <typename Value>
class CompletionTable {
 public:
  CompletionTable(const TspInstance& t, bool with_counts, Budget budget) : t_(t) {
    const int n = t.size();
    for (int v = 1; v <= n; ++v)
      if (NodeId{v} != t.origin()) nodes_.push_back(NodeId{v});
    m_ = static_cast<int>(nodes_.size());
    full_ = (std::uint32_t{1} << m_) - 1;
    cost_.assign(static_cast<std::size_t>(m_ + 1) * (m_ + 1), 0);
    for (int a = 0; a <= m_; ++a)
      for (int b = 0; b <= m_; ++b)
        if (a != b) cost_[a * (m_ + 1) + b] = static_cast<Value>(t.cost(node(a), node(b)));

    const std::size_t states = (static_cast<std::size_t>(full_) + 1) * static_cast<std::size_t>(m_);
    best_.assign(states, std::numeric_limits<Value>::max());
    if (with_counts) count_.assign(states, 0);

    for (std::uint32_t mask = 1; mask <= full_; ++mask) {
      if ((mask & 0xFFFu) == 0 && budget.expired()) {
        timed_out_ = true;
        return;
      }
      for (int v = 0; v < m_; ++v) {
        const std::uint32_t bit = std::uint32_t{1} << v;
        if (!(mask & bit)) continue;
        const std::size_t at = index(mask, v);
        const std::uint32_t rest = mask ^ bit;
        if (rest == 0) {
          best_[at] = arc(v, m_);
          if (with_counts) count_[at] = 1;
          continue;
        }
        Value best = std::numeric_limits<Value>::max();
        std::uint64_t ways = 0;
        for (int u = 0; u < m_; ++u) {
          if (!(rest & (std::uint32_t{1} << u))) continue;
          Value candidate = arc(v, u) + best_[index(rest, u)];
          if (candidate < best) {
            best = candidate;
            ways = with_counts ? count_[index(rest, u)] : 0;
          } else if (with_counts && candidate == best) {
            ways = add_saturating(ways, count_[index(rest, u)]);
          }
        }
        best_[at] = best;
        if (with_counts) count_[at] = ways;
      }
    }
  }

  bool timed_out() const { return timed_out_; }
  bool overflowed() const { return overflow_; }

  Value optimum() const {
    Value best = std::numeric_limits<Value>::max();
    for (int v = 0; v < m_; ++v) best = std::min<Value>(best, arc(m_, v) + best_[index(full_, v)]);
    return best;
  }

  std::uint64_t optimal_count() const {
    const Value opt = optimum();
    std::uint64_t total = 0;
    for (int v = 0; v < m_; ++v)
      if (arc(m_, v) + best_[index(full_, v)] == opt) total = add_saturating(total, count_[index(full_, v)]);
    return total;
  }

  std::vector<NodeId> first_optimal_tour() const {
    std::vector<NodeId> order{t_.origin()};
    Value remaining = optimum();
    int current = m_;
    std::uint32_t mask = full_;
    while (mask != 0) {
      for (int v = 0; v < m_; ++v) {
        if (!(mask & (std::uint32_t{1} << v))) continue;
        if (arc(current, v) + best_[index(mask, v)] == remaining) {
          remaining -= arc(current, v);
          order.push_back(node(v));
          mask ^= std::uint32_t{1} << v;
          current = v;
          break;
        }
      }
    }
    return order;
  }

 private:
  NodeId node(int k) const { return k == m_ ? t_.origin() : nodes_[k]; }
  Value arc(int a, int b) const { return cost_[a * (m_ + 1) + b]; }
  std::size_t index(std::uint32_t mask, int v) const {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(v);
  }
  std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) const {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
      overflow_ = true;
      return std::numeric_limits<std::uint64_t>::max();
    }
    return a + b;
  }

  const TspInstance& t_;
  std::vector<NodeId> nodes_;
  int m_ = 0;
  std::uint32_t full_ = 0;
  std::vector<Value> cost_;
  std::vector<Value> best_;
  std::vector<std::uint64_t> count_;
  bool timed_out_ = false;
  mutable bool overflow_ = false;
};

void check_size(const TspInstance& t) {
  if (t.size() < 3) throw PreconditionError("exact TSP needs at least 3 nodes");
  if (t.size() > kHeldKarpMaxNodes)
    throw PreconditionError("Held-Karp is limited to " + std::to_string(kHeldKarpMaxNodes) + " nodes, got " +
                            std::to_string(t.size()));
}

bool fits_int32(const TspInstance& t) {
  Cost worst = 0;
  for (int i = 1; i <= t.size(); ++i)
    for (int j = 1; j <= t.size(); ++j) worst = std::max(worst, t.cost(NodeId{i}, NodeId{j}));
  return worst <= std::numeric_limits<std::int32_t>::max() / (2 * t.size());
}

template <typename Value>
TspSolution solve_with(const TspInstance& t, Budget budget) {
  TspSolution out;
  out.method = "held-karp";
  CompletionTable<Value> table(t, false, budget);
  if (table.timed_out()) return out;
  out.status = SolveStatus::Optimal;
  out.tour = make_tour_result(t, table.first_optimal_tour());
  return out;
}

struct CountPass {
  bool timed_out = false;
  bool overflow = false;
  Cost optimum = 0;
  std::uint64_t count = 0;
};

template <typename Value>
CountPass count_with(const TspInstance& t, Budget budget) {
  CompletionTable<Value> table(t, true, budget);
  CountPass pass;
  if (table.timed_out()) {
    pass.timed_out = true;
    return pass;
  }
  pass.optimum = static_cast<Cost>(table.optimum());
  pass.count = table.optimal_count();
  pass.overflow = table.overflowed();
  return pass;
}

CountPass count_pass(const TspInstance& t, Budget budget) {
  return fits_int32(t) ? count_with<std::int32_t>(t, budget) : count_with<std::int64_t>(t, budget);
}

}  // namespace

TspSolution held_karp(const TspInstance& t, Budget budget) {
  check_size(t);
  return fits_int32(t) ? solve_with<std::int32_t>(t, budget) : solve_with<std::int64_t>(t, budget);
}

TourCount count_optimal_tours(const TspInstance& t, Budget budget) {
  check_size(t);
  TourCount result;
  CountPass directed = count_pass(t, budget);
  if (directed.timed_out) return result;

  // A directed tour T has cost(T) + cost(reverse T) = 2 * optimum exactly when
  // both orientations are optimal; count those on the symmetrised matrix.
  TspInstance both(t.size(), 2 * t.large(), t.origin());
  for (int i = 1; i <= t.size(); ++i)
    for (int j = 1; j <= t.size(); ++j)
      if (i != j) both.set_cost(NodeId{i}, NodeId{j}, t.cost(NodeId{i}, NodeId{j}) + t.cost(NodeId{j}, NodeId{i}));
  CountPass symmetric = count_pass(both, budget);
  if (symmetric.timed_out) return result;

  result.status = SolveStatus::Optimal;
  result.optimum = directed.optimum;
  result.directed = directed.count;
  std::uint64_t reversible = symmetric.optimum == 2 * directed.optimum ? symmetric.count : 0;
  result.undirected = (directed.count - reversible) + reversible / 2;
  const auto n = static_cast<std::uint64_t>(t.size());
  result.overflow = directed.overflow || symmetric.overflow || directed.count > UINT64_MAX / n;
  result.rotated_assignments = result.overflow ? UINT64_MAX : directed.count * n;
  return result;
}

std::optional<int> min_large_arcs(const TspInstance& t, Budget budget) {
  check_size(t);
  TspInstance indicator(t.size(), 1, t.origin());
  for (int i = 1; i <= t.size(); ++i)
    for (int j = 1; j <= t.size(); ++j)
      if (i != j) indicator.set_cost(NodeId{i}, NodeId{j}, t.is_large(NodeId{i}, NodeId{j}) ? 1 : 0);
  CompletionTable<std::int32_t> table(indicator, false, budget);
  if (table.timed_out()) return std::nullopt;
  return table.optimum();
}

}  // namespace stageflow
