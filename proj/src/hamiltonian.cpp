#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "stageflow/error.hpp"
#include "stageflow/oracles.hpp"

namespace stageflow {

namespace {

using Mask = std::uint64_t;

class CycleSearch {
 public:
  CycleSearch(const HcpInstance& g, Budget budget) : n_(g.size()), budget_(budget) {
    out_.assign(static_cast<std::size_t>(n_), 0);
    in_.assign(static_cast<std::size_t>(n_), 0);
    for (const auto& [tail, head] : g.arcs()) {
      out_[tail.value - 1] |= bit(head.value - 1);
      in_[head.value - 1] |= bit(tail.value - 1);
    }
    all_ = n_ == 64 ? ~Mask{0} : (bit(n_) - 1);
  }

  HcpResult run() {
    HcpResult result;
    path_.push_back(0);
    bool found = n_ == 1 ? false : dfs(bit(0));
    result.nodes_explored = explored_;
    if (timed_out_) return result;
    result.answer = found ? HcpAnswer::Yes : HcpAnswer::No;
    if (found)
      for (int v : path_) result.cycle.push_back(NodeId{v + 1});
    return result;
  }

 private:
  static Mask bit(int v) { return Mask{1} << v; }

  bool dfs(Mask visited) {
    if ((++explored_ & 0xFFFu) == 0 && budget_.expired()) timed_out_ = true;
    if (timed_out_) return false;
    const int cur = path_.back();
    const Mask open = all_ & ~visited;
    if (open == 0) return (out_[cur] & bit(0)) != 0;

    // Degree pruning: every unvisited node still needs a way in and a way out.
    Mask forced = 0;
    for (Mask rest = open; rest; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      const Mask ins = in_[u] & (open | bit(cur));
      const Mask outs = out_[u] & ((open & ~bit(u)) | bit(0));
      if (ins == 0 || outs == 0) return false;
      if (ins == bit(cur)) forced |= bit(u);
    }
    if (std::popcount(forced) > 1) return false;

    Mask choices = forced ? forced : (out_[cur] & open);
    for (; choices; choices &= choices - 1) {
      const int v = std::countr_zero(choices);
      path_.push_back(v);
      if (dfs(visited | bit(v))) return true;
      path_.pop_back();
      if (timed_out_) return false;
    }
    return false;
  }

  int n_;
  Budget budget_;
  std::vector<Mask> out_;
  std::vector<Mask> in_;
  Mask all_ = 0;
  std::vector<int> path_;
  std::uint64_t explored_ = 0;
  bool timed_out_ = false;
};

}  // namespace

HcpResult hamiltonian_cycle_exists(const HcpInstance& graph, Budget budget) {
  if (graph.size() > kHamiltonianMaxNodes)
    throw PreconditionError("Hamiltonian search is limited to " + std::to_string(kHamiltonianMaxNodes) + " nodes");
  return CycleSearch(graph, budget).run();
}

}  // namespace stageflow
