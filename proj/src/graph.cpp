#include <algorithm>
#include <vector>

#include "mce/error.hpp"
#include "mce/search.hpp"

namespace mce {

NodeId PartialGraph::resolve(NodeId id) const {
  for (auto it = forward_.find(id); it != forward_.end(); it = forward_.find(id)) id = it->second;
  return id;
}

const GraphNode& PartialGraph::node(NodeId id) const {
  auto it = nodes_.find(resolve(id));
  if (it == nodes_.end()) throw Error(ErrorKind::Precondition, "no node " + std::to_string(id));
  return it->second;
}

std::optional<NodeId> PartialGraph::node_of(const GroundRV& rv) const {
  auto it = rv_index_.find(rv);
  if (it == rv_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> PartialGraph::children(NodeId id) const {
  auto it = children_.find(resolve(id));
  if (it == children_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<NodeId> PartialGraph::parents(NodeId id) const {
  id = resolve(id);
  std::vector<NodeId> out;
  for (const auto& [p, cs] : children_) {
    if (cs.count(id)) out.push_back(p);
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> PartialGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [p, cs] : children_) {
    for (NodeId c : cs) out.emplace_back(p, c);
  }
  return out;
}

bool PartialGraph::reaches(NodeId from, NodeId to) const {
  from = resolve(from);
  to = resolve(to);
  std::vector<NodeId> stack{from};
  std::set<NodeId> seen{from};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n == to) return true;
    auto it = children_.find(n);
    if (it == children_.end()) continue;
    for (NodeId c : it->second) {
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return false;
}

std::vector<NodeId> PartialGraph::nodes_with_dim(const GroundRV& rv) const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_) {
    if (n.factor.has(rv)) out.push_back(id);
  }
  return out;
}

std::size_t PartialGraph::total_cells() const {
  std::size_t total = 0;
  for (const auto& [id, n] : nodes_) total += n.factor.size();
  return total;
}

NodeId PartialGraph::add_node(const GroundRV& rv, Factor factor) {
  if (rv_index_.count(rv)) {
    throw Error(ErrorKind::Precondition, rv.name() + " already has a node");
  }
  const NodeId id = next_id_++;
  nodes_.emplace(id, GraphNode{id, {rv}, std::move(factor)});
  rv_index_.emplace(rv, id);
  return id;
}

bool PartialGraph::add_edge(NodeId parent, NodeId child) {
  parent = resolve(parent);
  child = resolve(child);
  if (!live(parent) || !live(child)) throw Error(ErrorKind::Precondition, "edge between dead nodes");
  if (parent == child) return true;
  if (reaches(child, parent)) return false;
  children_[parent].insert(child);
  return true;
}

bool PartialGraph::can_merge(NodeId a, NodeId b) const {
  a = resolve(a);
  b = resolve(b);
  if (a == b || !live(a) || !live(b)) return false;
  // Merging closes a cycle exactly when a path of length >= 2 joins them.
  auto long_path = [this](NodeId from, NodeId to) {
    for (NodeId c : children(from)) {
      if (c != to && reaches(c, to)) return true;
    }
    return false;
  };
  return !long_path(a, b) && !long_path(b, a);
}

NodeId PartialGraph::merge(NodeId a, NodeId b) {
  a = resolve(a);
  b = resolve(b);
  if (!can_merge(a, b)) {
    throw Error(ErrorKind::Precondition, "merging nodes " + std::to_string(a) + " and " +
                                             std::to_string(b) + " would create a cycle");
  }
  GraphNode& na = nodes_.at(a);
  GraphNode& nb = nodes_.at(b);
  const NodeId id = next_id_++;
  GraphNode merged{id, na.members, multiply(na.factor, nb.factor)};
  merged.members.insert(merged.members.end(), nb.members.begin(), nb.members.end());
  std::sort(merged.members.begin(), merged.members.end());

  std::set<NodeId> kids;
  for (NodeId old : {a, b}) {
    if (auto it = children_.find(old); it != children_.end()) kids.insert(it->second.begin(), it->second.end());
    children_.erase(old);
  }
  kids.erase(a);
  kids.erase(b);
  for (auto& [p, cs] : children_) {
    if (cs.erase(a) + cs.erase(b) > 0) cs.insert(id);
  }
  if (!kids.empty()) children_[id] = std::move(kids);

  for (const auto& m : merged.members) rv_index_[m] = id;
  nodes_.erase(a);
  nodes_.erase(b);
  nodes_.emplace(id, std::move(merged));
  forward_[a] = id;
  forward_[b] = id;
  return id;
}

void PartialGraph::sum_out(const GroundRV& rv) {
  const auto holders = nodes_with_dim(rv);
  if (holders.size() != 1) {
    throw Error(ErrorKind::Precondition, rv.name() + " appears in " + std::to_string(holders.size()) +
                                             " factors; margin needs exactly one");
  }
  GraphNode& n = nodes_.at(holders.front());
  n.factor = marginalize(n.factor, rv);
  std::erase(n.members, rv);
  rv_index_.erase(rv);
}

}  // namespace mce
