#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "stageflow/error.hpp"
#include "stageflow/oracles.hpp"

namespace stageflow {

namespace {

// The incumbent is ordered by (value, visiting order). Search only discards a
// subtree when nothing inside it can beat the incumbent under that order, so
// the final answer is the same whichever worker finds what first.
struct Incumbent {
  Cost value = std::numeric_limits<Cost>::max();
  std::vector<int> order;

  bool improved_by(Cost v, const std::vector<int>& o) const { return v < value || (v == value && o < order); }
};

class Search {
 public:
  Search(const TspInstance& t, Budget budget) : t_(t), n_(t.size()), budget_(budget) {
    min_out_.assign(static_cast<std::size_t>(n_) + 1, std::numeric_limits<Cost>::max());
    min_in_.assign(static_cast<std::size_t>(n_) + 1, std::numeric_limits<Cost>::max());
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) {
        if (i == j) continue;
        Cost c = t.cost(NodeId{i}, NodeId{j});
        min_out_[i] = std::min(min_out_[i], c);
        min_in_[j] = std::min(min_in_[j], c);
      }
  }

  void seed(Incumbent start) { shared_ = std::move(start); }

  // Explores every tour beginning with `prefix`.
  void explore(const std::vector<int>& prefix) {
    Worker w(*this);
    for (int v : prefix) w.push(v);
    w.dfs();
    explored_ += w.nodes;
  }

  bool timed_out() const { return timed_out_.load(); }
  std::uint64_t explored() const { return explored_.load(); }
  Incumbent best() const {
    std::lock_guard lock(mutex_);
    return shared_;
  }
  int size() const { return n_; }
  int origin() const { return t_.origin().value; }

 private:
  struct Worker {
    explicit Worker(Search& s)
        : search(s), visited(static_cast<std::size_t>(s.n_) + 1, false), local(s.best()) {
      for (int v = 1; v <= s.n_; ++v) {
        if (v == s.origin()) continue;
        out_sum += s.min_out_[v];
        in_sum += s.min_in_[v];
      }
    }

    void push(int v) {
      if (!path.empty()) cost += search.t_.cost(NodeId{path.back()}, NodeId{v});
      path.push_back(v);
      visited[v] = true;
      if (v != search.origin()) {
        out_sum -= search.min_out_[v];
        in_sum -= search.min_in_[v];
      }
    }

    void pop() {
      int v = path.back();
      path.pop_back();
      visited[v] = false;
      if (v != search.origin()) {
        out_sum += search.min_out_[v];
        in_sum += search.min_in_[v];
      }
      if (!path.empty()) cost -= search.t_.cost(NodeId{path.back()}, NodeId{v});
    }

    // Arcs still to be chosen: one out of the current node and of every
    // unvisited node, equivalently one into every unvisited node and the origin.
    Cost bound() const {
      Cost outs = out_sum + search.min_out_[path.back()];
      Cost ins = in_sum + search.min_in_[search.origin()];
      return cost + std::max(outs, ins);
    }

    bool prune(Cost b) const {
      if (b > local.value) return true;
      if (b < local.value) return false;
      // Equal bound: only a lexicographically smaller tour could still win.
      return std::lexicographical_compare(local.order.begin(), local.order.begin() + static_cast<long>(path.size()),
                                          path.begin(), path.end());
    }

    void refresh() {
      if (search.budget_.expired()) search.timed_out_ = true;
      Incumbent shared = search.best();
      if (shared.improved_by(local.value, local.order)) return;
      local = std::move(shared);
    }

    void offer(Cost value) {
      if (!local.improved_by(value, path)) return;
      local.value = value;
      local.order = path;
      std::lock_guard lock(search.mutex_);
      if (search.shared_.improved_by(value, path)) search.shared_ = local;
    }

    void dfs() {
      if (search.timed_out_.load()) return;
      if ((++nodes & 0x3FFu) == 0) refresh();
      const int n = search.n_;
      if (static_cast<int>(path.size()) == n) {
        offer(cost + search.t_.cost(NodeId{path.back()}, NodeId{search.origin()}));
        return;
      }
      if (!local.order.empty() && prune(bound())) return;
      for (int v = 1; v <= n; ++v) {
        if (visited[v]) continue;
        push(v);
        dfs();
        pop();
        if (search.timed_out_.load()) return;
      }
    }

    Search& search;
    std::vector<int> path;
    std::vector<bool> visited;
    Cost cost = 0;
    Cost out_sum = 0;
    Cost in_sum = 0;
    Incumbent local;
    std::uint64_t nodes = 0;
  };

  const TspInstance& t_;
  int n_;
  Budget budget_;
  std::vector<Cost> min_out_;
  std::vector<Cost> min_in_;
  mutable std::mutex mutex_;
  Incumbent shared_;
  std::atomic<bool> timed_out_{false};
  std::atomic<std::uint64_t> explored_{0};
};

Incumbent nearest_neighbour(const TspInstance& t) {
  const int n = t.size();
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  Incumbent inc;
  inc.order.push_back(t.origin().value);
  used[t.origin().value] = true;
  while (static_cast<int>(inc.order.size()) < n) {
    int from = inc.order.back(), pick = 0;
    for (int v = 1; v <= n; ++v)
      if (!used[v] && (pick == 0 || t.cost(NodeId{from}, NodeId{v}) < t.cost(NodeId{from}, NodeId{pick}))) pick = v;
    used[pick] = true;
    inc.order.push_back(pick);
  }
  std::vector<NodeId> order;
  for (int v : inc.order) order.push_back(NodeId{v});
  inc.value = tour_value(t, order);
  return inc;
}

TourResult to_result(const TspInstance& t, const Incumbent& inc) {
  std::vector<NodeId> order;
  for (int v : inc.order) order.push_back(NodeId{v});
  return make_tour_result(t, std::move(order));
}

}  // namespace

TspSolution branch_and_bound(const TspInstance& t, Budget budget, int threads) {
  if (t.size() < 3) throw PreconditionError("exact TSP needs at least 3 nodes");
  Search search(t, budget);
  search.seed(nearest_neighbour(t));

  // Work items are the two-node prefixes in ascending order.
  std::vector<std::vector<int>> tasks;
  for (int v = 1; v <= t.size(); ++v)
    if (v != search.origin()) tasks.push_back({search.origin(), v});

  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t k = next++; k < tasks.size() && !search.timed_out(); k = next++) search.explore(tasks[k]);
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(tasks.size()));
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  TspSolution out;
  out.method = "branch-and-bound";
  out.nodes_explored = search.explored();
  TourResult best = to_result(t, search.best());
  if (search.timed_out()) {
    out.status = SolveStatus::Timeout;
    out.incumbent = std::move(best);
  } else {
    out.status = SolveStatus::Optimal;
    out.tour = std::move(best);
  }
  return out;
}

}  // namespace stageflow
