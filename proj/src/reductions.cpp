#include "stageflow/reductions.hpp"

#include <algorithm>
#include <string>

#include "stageflow/error.hpp"

namespace stageflow {

int replacement_count(SplitKind kind) { return kind == SplitKind::Split2 ? 2 : 3; }

AttachmentOrder attachment_order(const HcpInstance& graph, const GroupRoles& roles) {
  AttachmentOrder order;
  for (const auto& [tail, head] : graph.arcs()) {
    if (!roles.is_group(tail) || !roles.is_group(head)) continue;
    auto& list = order[tail];
    if (std::find(list.begin(), list.end(), head) == list.end()) list.push_back(head);
  }
  // Neighbours reachable only through an incoming arc go last.
  for (const auto& [tail, head] : graph.arcs()) {
    if (!roles.is_group(tail) || !roles.is_group(head)) continue;
    auto& list = order[head];
    if (std::find(list.begin(), list.end(), tail) == list.end()) list.push_back(tail);
  }
  return order;
}

EnlargeOptions canonical_enlarge_options() {
  EnlargeOptions options;
  options.pair_cost = 1;
  options.triple_cost = 2;
  options.sink_cost = 3;
  return options;
}

TspInstance hcp_to_tsp(const HcpInstance& graph, Cost small, Cost large) {
  if (small >= large) throw PreconditionError("small cost must be below large cost");
  TspInstance t(graph.size(), large, NodeId{1});
  for (const auto& [tail, head] : graph.arcs()) t.set_cost(tail, head, small);
  return t;
}

std::vector<NodeId> considered_neighbors(const TspInstance& t, NodeId v, const GroupRoles& roles,
                                         const AttachmentOrder& order) {
  std::vector<NodeId> found;
  for (int u = 1; u <= t.size(); ++u) {
    NodeId w{u};
    if (w == v || !roles.is_group(w)) continue;
    if (!t.is_large(v, w) || !t.is_large(w, v)) found.push_back(w);
  }
  auto it = order.find(v);
  if (it == order.end()) return found;

  std::vector<NodeId> ordered;
  for (NodeId w : it->second)
    if (std::find(found.begin(), found.end(), w) != found.end()) ordered.push_back(w);
  if (ordered.size() != found.size())
    throw PreconditionError("attachment order for node " + std::to_string(v.value) +
                            " does not cover its considered neighbours");
  return ordered;
}

namespace {

struct SplitPlan {
  NodeId node;
  SplitKind kind;
  Cost internal_cost;
  std::vector<NodeId> neighbors;
};

SplitKind kind_for_degree(NodeId v, std::size_t degree) {
  if (degree == 2) return SplitKind::Split2;
  if (degree == 3) return SplitKind::Split3;
  throw PreconditionError("node " + std::to_string(v.value) + " has considered degree " + std::to_string(degree) +
                          "; only degree 2 or 3 can be split without changing the optimal tour");
}

EnlargeResult apply_splits(const TspInstance& t, const GroupRoles& roles, const std::vector<SplitPlan>& plans,
                           std::optional<Cost> sink_cost) {
  const int n = t.size();
  std::vector<const SplitPlan*> plan_of(static_cast<std::size_t>(n) + 1, nullptr);
  for (const auto& p : plans) plan_of[p.node.value] = &p;

  EnlargeResult result{TspInstance(1), roles, {}};
  result.replacement.resize(static_cast<std::size_t>(n));
  int next = 1;
  for (int v = 1; v <= n; ++v) {
    int copies = plan_of[v] ? replacement_count(plan_of[v]->kind) : 1;
    for (int c = 0; c < copies; ++c) result.replacement[v - 1].push_back(NodeId{next++});
  }
  const int new_n = next - 1;
  // Source and sink are optional; id 0 marks an absent role.
  auto image_or_none = [&](NodeId v) { return v.value >= 1 && v.value <= n ? result.image(v) : NodeId{0}; };
  result.roles = GroupRoles{result.image(roles.origin), image_or_none(roles.source), image_or_none(roles.sink)};
  TspInstance out(new_n, t.large(), result.image(t.origin()));

  // Replacement of u that serves the arc towards w.
  auto endpoint = [&](NodeId u, NodeId w) -> std::optional<NodeId> {
    const SplitPlan* p = plan_of[u.value];
    if (!p) return result.image(u);
    auto it = std::find(p->neighbors.begin(), p->neighbors.end(), w);
    if (it == p->neighbors.end()) return std::nullopt;
    return result.replacement[u.value - 1][static_cast<std::size_t>(it - p->neighbors.begin())];
  };

  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (a == b) continue;
      NodeId u{a}, w{b};
      Cost c = t.cost(u, w);
      if (c >= t.large()) continue;
      auto tail = endpoint(u, w);
      auto head = endpoint(w, u);
      if (tail && head) {
        out.set_cost(*tail, *head, c);
        continue;
      }
      // Arc not attached to a single replacement: copy it to every replacement.
      for (NodeId x : result.replacement[a - 1])
        for (NodeId y : result.replacement[b - 1]) out.set_cost(x, y, c);
    }
  }
  for (const auto& p : plans) {
    const auto& reps = result.replacement[p.node.value - 1];
    for (NodeId x : reps)
      for (NodeId y : reps)
        if (x != y) out.set_cost(x, y, p.internal_cost);
  }
  if (sink_cost && result.roles.sink.value != 0) {
    for (int a = 1; a <= new_n; ++a) {
      NodeId u{a};
      if (!result.roles.is_group(u) || out.is_large(u, result.roles.sink)) continue;
      out.set_cost(u, result.roles.sink, *sink_cost);
    }
  }
  result.instance = std::move(out);
  return result;
}

void check_splittable(const TspInstance& t, NodeId v, const GroupRoles& roles) {
  if (!t.contains(v)) throw PreconditionError("node " + std::to_string(v.value) + " outside instance");
  if (v == roles.origin || v == roles.sink || v == roles.source)
    throw PreconditionError("node " + std::to_string(v.value) + " is the origin, source or sink and cannot be split");
}

}  // namespace

EnlargeResult split_node(const TspInstance& t, NodeId v, SplitKind kind, Cost internal_cost,
                         const GroupRoles& roles, const AttachmentOrder& order) {
  check_splittable(t, v, roles);
  auto neighbors = considered_neighbors(t, v, roles, order);
  if (static_cast<int>(neighbors.size()) != replacement_count(kind)) {
    (void)kind_for_degree(v, neighbors.size());  // throws for degree outside {2, 3}
    throw PreconditionError("node " + std::to_string(v.value) + " has considered degree " +
                            std::to_string(neighbors.size()) + ", which does not match the requested split");
  }
  return apply_splits(t, roles, {SplitPlan{v, kind, internal_cost, std::move(neighbors)}}, std::nullopt);
}

EnlargeResult enlarge_all(const TspInstance& t, const GroupRoles& roles, const EnlargeOptions& options,
                          const AttachmentOrder& order) {
  std::vector<SplitPlan> plans;
  for (int v = 1; v <= t.size(); ++v) {
    NodeId node{v};
    if (!roles.is_group(node)) continue;
    auto neighbors = considered_neighbors(t, node, roles, order);
    SplitKind kind = kind_for_degree(node, neighbors.size());
    Cost internal = kind == SplitKind::Split2 ? options.pair_cost : options.triple_cost;
    plans.push_back(SplitPlan{node, kind, internal, std::move(neighbors)});
  }
  return apply_splits(t, roles, plans, options.sink_cost);
}

EnlargeResult canonical_enlargement(Cost large) {
  HcpInstance seed = canonical_hcp_seed();
  GroupRoles roles = GroupRoles::standard(seed.size());
  TspInstance base = hcp_to_tsp(seed, 1, large);
  return enlarge_all(base, roles, canonical_enlarge_options(), attachment_order(seed, roles));
}

std::vector<NodeId> contract_tour(const std::vector<NodeId>& tour, const EnlargeResult& enlargement,
                                  const std::vector<int>& keep) {
  const int n_old = static_cast<int>(enlargement.replacement.size());
  std::vector<int> owner(static_cast<std::size_t>(enlargement.instance.size()) + 1, 0);
  for (int v = 1; v <= n_old; ++v)
    for (NodeId r : enlargement.replacement[v - 1]) owner[r.value] = v;

  std::vector<int> seen(static_cast<std::size_t>(n_old) + 1, 0);
  std::vector<NodeId> contracted;
  for (NodeId r : tour) {
    int v = owner.at(r.value);
    int occurrence = seen[v]++;
    int wanted = keep.empty() ? 0 : keep.at(v - 1);
    if (occurrence == wanted) contracted.push_back(NodeId{v});
  }
  return contracted;
}

}  // namespace stageflow
