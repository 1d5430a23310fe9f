#include <algorithm>
#include <set>

#include "mce/search.hpp"

namespace mce {

namespace {

Action multiply_action(NodeId a, NodeId b) {
  Action act;
  act.kind = ActionKind::Multiply;
  act.first = a;
  act.second = b;
  return act;
}

std::size_t joint_cells(const PartialGraph& g, const std::vector<NodeId>& ids) {
  std::set<GroundRV> dims;
  for (NodeId id : ids) {
    const auto& d = g.node(id).factor.dims();
    dims.insert(d.begin(), d.end());
  }
  std::size_t n = 1;
  for (const auto& v : dims) n *= v.cardinality();
  return n;
}

}  // namespace

Action merge_step(const PartialGraph& g, NodeId a, NodeId b) {
  a = g.resolve(a);
  b = g.resolve(b);
  if (g.can_merge(a, b)) return multiply_action(a, b);
  if (!g.reaches(a, b)) std::swap(a, b);
  // Nodes strictly between a and b; absorb the one nearest to a first.
  std::vector<NodeId> between;
  for (const auto& [id, n] : g.nodes()) {
    if (id != a && id != b && g.reaches(a, id) && g.reaches(id, b)) between.push_back(id);
  }
  for (NodeId c : g.children(a)) {
    if (std::find(between.begin(), between.end(), c) == between.end()) continue;
    const bool first = std::none_of(between.begin(), between.end(),
                                    [&](NodeId z) { return z != c && g.reaches(z, c); });
    if (first) return multiply_action(a, c);
  }
  return multiply_action(a, b);  // unreachable for an acyclic graph
}

std::optional<Action> DefaultPolicy::evaluation(const SearchContext& ctx, const SearchState& s) const {
  const PartialGraph& g = s.graph;
  std::optional<GroundRV> direct;
  std::size_t best_reduction = 0;
  std::optional<std::pair<NodeId, NodeId>> merge;
  std::size_t best_joint = 0;

  for (const auto& v : eliminable(ctx, s, opts_.margin_gate)) {
    const auto holders = g.nodes_with_dim(v);
    if (holders.size() == 1) {
      const std::size_t cells = g.node(holders.front()).factor.size();
      const std::size_t reduction = cells - cells / v.cardinality();
      if (!direct || reduction > best_reduction) {
        direct = v;
        best_reduction = reduction;
      }
    } else if (!direct) {
      const Action step = merge_step(g, holders[0], holders[1]);
      if (!can_multiply(s, step.first, step.second)) continue;
      const std::size_t joint = joint_cells(g, holders);
      if (!merge || joint < best_joint) {
        merge = std::make_pair(step.first, step.second);
        best_joint = joint;
      }
    }
  }
  if (direct) {
    Action a;
    a.kind = ActionKind::Margin;
    a.variable = *direct;
    return a;
  }
  if (merge) return multiply_action(merge->first, merge->second);
  if (s.subgoals.empty() && g.size() > 1) {
    auto it = g.nodes().begin();
    const NodeId first = it->first;
    return merge_step(g, first, std::next(it)->first);
  }
  return std::nullopt;
}

std::optional<Action> DefaultPolicy::choose(const SearchContext& ctx, const SearchState& s) {
  if (opts_.evaluate) {
    if (auto a = evaluation(ctx, s)) return a;
  }
  // Construction, in preference order. Applicability mirrors the operators.
  const auto actions = construction_actions(s);
  for (ActionKind kind : {ActionKind::FindInGraph, ActionKind::ProveGoal, ActionKind::FindProbDependency}) {
    for (const auto& a : actions) {
      if (a.kind == kind) return a;
    }
  }
  return std::nullopt;
}

std::optional<Action> RandomPolicy::choose(const SearchContext& ctx, const SearchState& s) {
  const auto actions = applicable_actions(ctx, s, margin_gate_);
  if (actions.empty()) return std::nullopt;
  return actions[rng_() % actions.size()];
}

std::optional<Action> ScriptedPolicy::choose(const SearchContext&, const SearchState&) {
  if (exhausted()) return std::nullopt;
  return script_[next_++];
}

}  // namespace mce
