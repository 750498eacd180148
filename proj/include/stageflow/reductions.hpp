#pragma once

#include <map>
#include <optional>
#include <vector>

#include "stageflow/graph.hpp"

namespace stageflow {

enum class SplitKind { Split2, Split3 };

int replacement_count(SplitKind kind);

// Ordered neighbour list per group node. The k-th neighbour is attached to the
// k-th replacement node; nodes without an entry use ascending node order.
using AttachmentOrder = std::map<NodeId, std::vector<NodeId>>;

AttachmentOrder attachment_order(const HcpInstance& graph, const GroupRoles& roles);

struct EnlargeOptions {
  Cost pair_cost = 1;    // both arcs between the two replacements of a Split2
  Cost triple_cost = 2;  // all six arcs inside a Split3 triangle
  // When set, every non-large arc from a group node into the sink is re-priced.
  std::optional<Cost> sink_cost;
};

// The options that turn the seed into the 51-node table.
EnlargeOptions canonical_enlarge_options();

struct EnlargeResult {
  TspInstance instance;
  GroupRoles roles;
  // replacement[v - 1] lists the new ids that took the place of old node v.
  std::vector<std::vector<NodeId>> replacement;

  NodeId image(NodeId old_node) const { return replacement.at(old_node.value - 1).front(); }
};

// cost(i, j) = small for every arc of the graph, large otherwise.
TspInstance hcp_to_tsp(const HcpInstance& graph, Cost small, Cost large);

// Group neighbours joined to v by at least one non-large arc, in attachment
// order. Arcs to the origin, source and sink are not considered.
std::vector<NodeId> considered_neighbors(const TspInstance& t, NodeId v, const GroupRoles& roles,
                                         const AttachmentOrder& order = {});

// Replaces v by two or three nodes. Each considered arc of v moves to exactly
// one replacement; all remaining arcs of v are copied to every replacement.
// Later nodes shift up by (replacements - 1).
EnlargeResult split_node(const TspInstance& t, NodeId v, SplitKind kind, Cost internal_cost,
                         const GroupRoles& roles, const AttachmentOrder& order = {});

// Splits every group node (Split2 for considered-degree 2, Split3 for 3).
EnlargeResult enlarge_all(const TspInstance& t, const GroupRoles& roles, const EnlargeOptions& options = {},
                          const AttachmentOrder& order = {});

// hcp_to_tsp(seed, 1, large) followed by enlarge_all with the canonical options.
EnlargeResult canonical_enlargement(Cost large = kDefaultLargeCost);

// Maps a tour of an enlarged instance back to the original by keeping, for each
// original node, the replacement at position `keep[v-1]` of its first visit
// order (0 = first visited replacement). Returns the contracted visiting order.
std::vector<NodeId> contract_tour(const std::vector<NodeId>& tour, const EnlargeResult& enlargement,
                                  const std::vector<int>& keep);

}  // namespace stageflow
