#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace stageflow {

using Cost = std::int64_t;

inline constexpr Cost kDefaultLargeCost = 200;

// 1-based node index. In the canonical instance node 1 is the tour origin,
// node 2 the source "I", node n the sink "O" and everything between is the
// inner group.
struct NodeId {
  int value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(int v) : value(v) {}
  constexpr auto operator<=>(const NodeId&) const = default;
};

std::ostream& operator<<(std::ostream& os, NodeId node);

// Designated nodes of a source/group/sink layout. Every node that is none of
// the three belongs to the group.
struct GroupRoles {
  NodeId origin{1};
  NodeId source{2};
  NodeId sink{0};

  static GroupRoles standard(int n) { return {NodeId{1}, NodeId{2}, NodeId{n}}; }
  bool is_group(NodeId v) const { return v != origin && v != source && v != sink; }
};

// Directed TSP instance with a fully populated cost matrix.
class TspInstance {
 public:
  explicit TspInstance(int n, Cost large = kDefaultLargeCost, NodeId origin = NodeId{1});

  int size() const { return n_; }
  Cost large() const { return large_; }
  NodeId origin() const { return origin_; }

  Cost cost(NodeId i, NodeId j) const { return cost_[index(i, j)]; }
  void set_cost(NodeId i, NodeId j, Cost c);
  bool is_large(NodeId i, NodeId j) const { return cost(i, j) >= large_; }
  bool contains(NodeId v) const { return v.value >= 1 && v.value <= n_; }

  bool operator==(const TspInstance&) const = default;

 private:
  std::size_t index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i.value - 1) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j.value - 1);
  }

  int n_;
  Cost large_;
  NodeId origin_;
  std::vector<Cost> cost_;
};

// Directed graph for the Hamiltonian-cycle side. Arc order is preserved: the
// enlargement uses it to decide which replacement node receives which arc.
class HcpInstance {
 public:
  explicit HcpInstance(int n);

  int size() const { return n_; }
  const std::vector<std::pair<NodeId, NodeId>>& arcs() const { return arcs_; }
  bool has_arc(NodeId i, NodeId j) const;
  void add_arc(NodeId i, NodeId j);

  // Number of distinct neighbours (either direction), optionally ignoring
  // arcs that touch nodes outside the group of `roles`.
  int degree(NodeId v) const;
  int group_degree(NodeId v, const GroupRoles& roles) const;

 private:
  int n_;
  std::vector<std::pair<NodeId, NodeId>> arcs_;
  std::vector<std::uint8_t> adjacency_;
};

// Text format: "n=<int>" header, optional "large=<int>" and "origin=<int>"
// lines, then one "<i> <j> <cost>" line per listed arc. '#' starts a comment.
// Unlisted off-diagonal entries take the large cost.
TspInstance parse_tsp_instance(std::istream& in, const std::string& source_name = "<stream>",
                               Cost default_large = kDefaultLargeCost);
TspInstance load_tsp_instance(const std::filesystem::path& path, Cost default_large = kDefaultLargeCost);
void write_tsp_instance(std::ostream& out, const TspInstance& instance);
void save_tsp_instance(const std::filesystem::path& path, const TspInstance& instance);

// The 51-node counterexample cost table.
TspInstance canonical_counterexample(Cost large = kDefaultLargeCost);

// The 23-node Hamiltonian-cycle seed whose enlargement is the counterexample:
// node 1 origin, 2 source, 3..22 group, 23 sink.
HcpInstance canonical_hcp_seed();

}  // namespace stageflow
