#pragma once

// Agenda search that interleaves construction of a belief network from the
// knowledge base with partial evaluation of that network.
//
// A search state holds the pending subgoals, the substitution built so far,
// the partial graph (nodes carry factors, possibly merged products) and the
// set of variables already summed out. Construction operators turn subgoals
// into graph structure; evaluation operators (multiply, margin) shrink the
// graph. A query is answered when no subgoals remain and the graph has been
// reduced to a single node over the hypothesis variable.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mce/deduce.hpp"
#include "mce/factor.hpp"
#include "mce/kb.hpp"

namespace mce {

using NodeId = std::uint32_t;

struct SubGoal {
  BodyAtom formula;
  /// Nodes waiting for this subgoal as a parent. Ids may predate merges;
  /// resolve them through PartialGraph::resolve.
  std::vector<NodeId> pending_children;

  bool is_random_variable() const { return std::holds_alternative<AltAtom>(formula); }
};

struct GraphNode {
  NodeId id = 0;
  std::vector<GroundRV> members;  // variables this node is indexed under
  Factor factor;
};

class PartialGraph {
 public:
  const std::map<NodeId, GraphNode>& nodes() const { return nodes_; }
  const std::map<GroundRV, NodeId>& rv_index() const { return rv_index_; }
  std::size_t size() const { return nodes_.size(); }

  /// Follows merge forwarding to the live node that absorbed `id`.
  NodeId resolve(NodeId id) const;
  bool live(NodeId id) const { return nodes_.count(id) != 0; }
  const GraphNode& node(NodeId id) const;
  std::optional<NodeId> node_of(const GroundRV& rv) const;

  std::vector<NodeId> children(NodeId id) const;
  std::vector<NodeId> parents(NodeId id) const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  /// Directed path from `from` to `to` (length >= 0).
  bool reaches(NodeId from, NodeId to) const;
  /// Live nodes whose factor has `rv` as a dim, in id order.
  std::vector<NodeId> nodes_with_dim(const GroundRV& rv) const;
  std::size_t total_cells() const;

  NodeId add_node(const GroundRV& rv, Factor factor);
  /// Adds parent->child (ids resolved). Returns false, leaving the graph
  /// unchanged, if the edge would close a cycle. Self edges are dropped.
  bool add_edge(NodeId parent, NodeId child);
  /// True when merging the two live nodes keeps the graph acyclic.
  bool can_merge(NodeId a, NodeId b) const;
  /// Replaces both nodes by a fresh node holding the product factor.
  NodeId merge(NodeId a, NodeId b);
  /// Sums `rv` out of the single node whose factor mentions it and drops it
  /// from the index.
  void sum_out(const GroundRV& rv);

 private:
  std::map<NodeId, GraphNode> nodes_;
  std::map<NodeId, std::set<NodeId>> children_;
  std::map<GroundRV, NodeId> rv_index_;
  std::map<NodeId, NodeId> forward_;
  NodeId next_id_ = 0;
};

enum class ActionKind { FindProbDependency, ProveGoal, FindInGraph, Multiply, Margin };

const char* action_name(ActionKind kind);
std::optional<ActionKind> parse_action_name(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::FindProbDependency;
  std::size_t subgoal = 0;  // construction actions
  std::size_t branch = 0;   // successor taken, as recorded in SearchState::trace
  NodeId first = 0;         // multiply
  NodeId second = 0;
  GroundRV variable;        // margin; matched by identity, outcomes optional

  bool constructs() const {
    return kind == ActionKind::FindProbDependency || kind == ActionKind::ProveGoal ||
           kind == ActionKind::FindInGraph;
  }
};

struct SearchState {
  std::vector<SubGoal> subgoals;
  Substitution theta;
  PartialGraph graph;
  std::set<GroundRV> marginalized;
  /// Per variable, how many dependency instances in the graph list it as a
  /// parent. Survives merges, which erase the edges themselves.
  std::map<GroundRV, std::size_t> children_found;
  /// Actions from the initial state to this one.
  std::vector<Action> trace;
  std::size_t renames = 0;
};

/// Ground variable denoted by an alternative-outcome subgoal under the
/// state's substitution, if its object arguments are ground.
std::optional<GroundRV> subgoal_variable(const SearchState& s, const SubGoal& g);
std::string describe_subgoal(const SearchState& s, const SubGoal& g);

/// Predicate-level marker passing. Every query variable marks its
/// predicate; marks flow from children to possible parents along
/// dependency statements, never revisiting a predicate on one path. The
/// number of marks a predicate receives bounds how many children one of its
/// variables can acquire while answering the query.
class MarkerTable {
 public:
  static constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);

  static MarkerTable build(const KnowledgeBase& kb, const Query& q);
  std::size_t expected_children(const std::string& predicate) const;
  const std::map<std::string, std::size_t>& counts() const { return counts_; }

 private:
  std::map<std::string, std::size_t> counts_;
};

struct SearchOptions {
  std::size_t depth_bound = 64;
  /// Report an error instead of branching when several dependency
  /// statements unify with one subgoal.
  bool strict = false;
};

/// Query-specific, immutable search inputs.
class SearchContext {
 public:
  SearchContext(KnowledgeBase kb, Query q, SearchOptions opts = {});

  const KnowledgeBase& kb() const { return kb_; }
  const Query& query() const { return query_; }
  const SearchOptions& options() const { return opts_; }
  const GroundRV& hypothesis() const { return hypothesis_; }
  const std::map<GroundRV, std::size_t>& evidence() const { return evidence_; }
  std::optional<std::size_t> observed(const GroundRV& rv) const;
  const MarkerTable& markers() const { return markers_; }

 private:
  KnowledgeBase kb_;
  Query query_;
  SearchOptions opts_;
  GroundRV hypothesis_;
  std::map<GroundRV, std::size_t> evidence_;
  MarkerTable markers_;
};

// ---------------------------------------------------------------------------
// Operators. All are pure: they return fresh states and never touch `s`.

struct Expansion {
  std::vector<SearchState> successors;
  bool depth_exceeded = false;
};

SearchState init_state(const SearchContext& ctx);

Expansion op_find_prob_dependency(const SearchContext& ctx, const SearchState& s, std::size_t subgoal);
Expansion op_prove_goal(const SearchContext& ctx, const SearchState& s, std::size_t subgoal);
Expansion op_find_in_graph(const SearchContext& ctx, const SearchState& s, std::size_t subgoal);

enum class GuardResult { Pass, Fail };

/// Fails when the subgoal denotes a variable that was already summed out.
GuardResult op_detect_marg_error(const SearchState& s, std::size_t subgoal);
/// First subgoal failing the guard, if any.
std::optional<std::size_t> find_marg_error(const SearchState& s);

/// True when no subgoal still waits to become a parent of node `n`.
bool settled(const SearchState& s, NodeId n);

/// Multiply precondition: distinct live nodes that merge without a cycle,
/// and that, together with all their ancestors, are settled. Later edges
/// only ever point into unsettled nodes, so such a merge can never turn a
/// later construction step into a cycle.
bool can_multiply(const SearchState& s, NodeId a, NodeId b);

/// Throws Error(Precondition) unless can_multiply holds.
SearchState op_multiply(const SearchContext& ctx, const SearchState& s, NodeId a, NodeId b);
/// Throws Error(Precondition) unless `v` is in exactly one node's factor,
/// is not the hypothesis and is not a pending subgoal.
SearchState op_margin(const SearchContext& ctx, const SearchState& s, const GroundRV& v);

bool margin_safe(const GroundRV& v, const SearchState& s, const MarkerTable& m);

/// True while some subgoal may still come to denote `v`.
bool is_pending(const SearchState& s, const GroundRV& v);

/// Factor dims other than the hypothesis that are no longer subgoals and,
/// with the gate on, pass margin_safe. They may still span several nodes.
std::vector<GroundRV> eliminable(const SearchContext& ctx, const SearchState& s, bool margin_gate);

bool is_terminal(const SearchContext& ctx, const SearchState& s);

/// Construction actions whose operators may apply, in subgoal order.
std::vector<Action> construction_actions(const SearchState& s);

/// Every action whose preconditions hold in `s`. Multiply is offered for
/// node pairs that share a dim, are adjacent, or include a scalar node.
std::vector<Action> applicable_actions(const SearchContext& ctx, const SearchState& s,
                                       bool margin_gate);

/// Construction actions yield every successor (each tagged with its branch
/// index in the trace); evaluation actions yield one.
Expansion apply_action(const SearchContext& ctx, const SearchState& s, const Action& a);

/// Follows a state's recorded path from the initial state.
SearchState replay_path(const SearchContext& ctx, const std::vector<Action>& path);

// ---------------------------------------------------------------------------
// Control

class Policy {
 public:
  virtual ~Policy() = default;
  /// Action to expand `s` with; nullopt marks `s` as a dead end.
  virtual std::optional<Action> choose(const SearchContext& ctx, const SearchState& s) = 0;
};

struct DefaultPolicyOptions {
  bool margin_gate = true;
  bool evaluate = true;
};

/// Evaluation first whenever a variable can be summed out, preferring the
/// margin that shrinks the model most; otherwise find-in-graph, then
/// prove-goal, then find-prob-dependency, scanning subgoals in order.
class DefaultPolicy : public Policy {
 public:
  explicit DefaultPolicy(DefaultPolicyOptions opts = {}) : opts_(opts) {}
  std::optional<Action> choose(const SearchContext& ctx, const SearchState& s) override;

 private:
  std::optional<Action> evaluation(const SearchContext& ctx, const SearchState& s) const;
  DefaultPolicyOptions opts_;
};

/// Uniform choice among applicable actions.
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed, bool margin_gate = true)
      : rng_(seed), margin_gate_(margin_gate) {}
  std::optional<Action> choose(const SearchContext& ctx, const SearchState& s) override;

 private:
  std::mt19937_64 rng_;
  bool margin_gate_;
};

/// Replays a fixed sequence of choices, one per expansion.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<std::optional<Action>> script) : script_(std::move(script)) {}
  std::optional<Action> choose(const SearchContext& ctx, const SearchState& s) override;
  bool exhausted() const { return next_ >= script_.size(); }

 private:
  std::vector<std::optional<Action>> script_;
  std::size_t next_ = 0;
};

/// A single merge step toward bringing `a` and `b` into one node without
/// creating a cycle: merges them directly when possible, otherwise `a` with
/// the first node on a path between them.
Action merge_step(const PartialGraph& g, NodeId a, NodeId b);

}  // namespace mce
