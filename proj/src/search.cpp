#include <algorithm>
#include <array>
#include <set>

#include "mce/error.hpp"
#include "mce/search.hpp"

namespace mce {

namespace {

constexpr std::array<std::pair<ActionKind, const char*>, 5> kActionNames{{
    {ActionKind::FindProbDependency, "find-prob-dependency"},
    {ActionKind::ProveGoal, "prove-goal"},
    {ActionKind::FindInGraph, "find-in-graph"},
    {ActionKind::Multiply, "multiply"},
    {ActionKind::Margin, "margin"},
}};

AltAtom atom_of(const GroundRV& rv) {
  AltAtom a;
  a.predicate = rv.predicate;
  for (const auto& arg : rv.args) a.args.push_back(Term::constant(arg));
  a.outcomes = rv.outcomes;
  return a;
}

/// Could the subgoal, now or after further binding, denote `v`?
bool may_denote(const SearchState& s, const SubGoal& g, const GroundRV& v) {
  const auto* alt = std::get_if<AltAtom>(&g.formula);
  if (!alt) return false;
  return unify(s.theta.apply(*alt), atom_of(v), Substitution{}).has_value();
}

const SubGoal& subgoal_at(const SearchState& s, std::size_t i) {
  if (i >= s.subgoals.size()) {
    throw Error(ErrorKind::Precondition, "no subgoal " + std::to_string(i));
  }
  return s.subgoals[i];
}

/// Successor skeleton: subgoal `i` removed, action appended to the path.
SearchState without_subgoal(const SearchState& s, std::size_t i, Action a) {
  SearchState ns = s;
  ns.subgoals.erase(ns.subgoals.begin() + static_cast<std::ptrdiff_t>(i));
  ns.trace.push_back(std::move(a));
  return ns;
}

Action construction(ActionKind kind, std::size_t subgoal, std::size_t branch) {
  Action a;
  a.kind = kind;
  a.subgoal = subgoal;
  a.branch = branch;
  return a;
}

/// Live nodes with a member that unifies with the subgoal, as
/// (node, substitution) pairs in node order.
std::vector<std::pair<NodeId, Substitution>> graph_matches(const SearchState& s, const AltAtom& goal) {
  std::vector<std::pair<NodeId, Substitution>> out;
  const AltAtom g = s.theta.apply(goal);
  for (const auto& [id, n] : s.graph.nodes()) {
    for (const auto& m : n.members) {
      if (auto th = unify(g, atom_of(m), s.theta)) out.emplace_back(id, std::move(*th));
    }
  }
  return out;
}

/// Conditional table of an instantiated statement as a factor over
/// (head, parents...) in that order.
Factor cpt_factor(const ProbDependency& d, const GroundRV& head, const std::vector<GroundRV>& parents) {
  std::vector<GroundRV> dims{head};
  dims.insert(dims.end(), parents.begin(), parents.end());
  std::size_t n = 1;
  for (const auto& v : dims) n *= v.cardinality();
  std::vector<double> values(n, 0.0);
  CptKey key(dims.size(), 0);
  for (std::size_t cell = 0; cell < n; ++cell) {
    std::size_t rest = cell;
    for (std::size_t k = dims.size(); k-- > 0;) {
      key[k] = rest % dims[k].cardinality();
      rest /= dims[k].cardinality();
    }
    if (auto it = d.cpt.find(key); it != d.cpt.end()) values[cell] = it->second;
  }
  return Factor(std::move(dims), std::move(values));
}

}  // namespace

const char* action_name(ActionKind kind) {
  for (const auto& [k, name] : kActionNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<ActionKind> parse_action_name(std::string_view name) {
  for (const auto& [k, n] : kActionNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::optional<GroundRV> subgoal_variable(const SearchState& s, const SubGoal& g) {
  const auto* alt = std::get_if<AltAtom>(&g.formula);
  if (!alt) return std::nullopt;
  const AltAtom a = s.theta.apply(*alt);
  if (!a.ground()) return std::nullopt;
  return to_ground_rv(a);
}

std::string describe_subgoal(const SearchState& s, const SubGoal& g) {
  if (const auto* alt = std::get_if<AltAtom>(&g.formula)) {
    const AltAtom a = s.theta.apply(*alt);
    std::string out = a.predicate;
    if (a.args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += to_string(a.args[i]);
    }
    return out + ")";
  }
  return print_atom(s.theta.apply(std::get<Atom>(g.formula)));
}

// ---------------------------------------------------------------------------

MarkerTable MarkerTable::build(const KnowledgeBase& kb, const Query& q) {
  std::map<std::string, std::vector<std::string>> parents_of;
  for (const auto& d : kb.dependencies) {
    for (const AltAtom* p : d.parents()) parents_of[d.head.predicate].push_back(p->predicate);
  }

  MarkerTable table;
  for (const auto& [pred, ps] : parents_of) {
    table.counts_[pred];
    for (const auto& p : ps) table.counts_[p];
  }

  std::vector<GroundRV> origins{to_ground_rv(q.hypothesis)};
  for (const auto& e : q.evidence) {
    GroundRV rv = to_ground_rv(e.variable);
    if (std::find(origins.begin(), origins.end(), rv) == origins.end()) origins.push_back(rv);
  }

  // Simple-path enumeration can blow up on dense predicate graphs; past the
  // work limit every count saturates, which only makes the gate stricter.
  constexpr std::size_t kWorkLimit = 1'000'000;
  std::size_t work = 0;
  bool saturated = false;
  std::set<std::string> on_path;
  auto visit = [&](auto& self, const std::string& pred) -> void {
    if (saturated) return;
    auto it = parents_of.find(pred);
    if (it == parents_of.end()) return;
    for (const auto& p : it->second) {
      if (on_path.count(p)) continue;
      if (++work > kWorkLimit) {
        saturated = true;
        return;
      }
      ++table.counts_[p];
      on_path.insert(p);
      self(self, p);
      on_path.erase(p);
    }
  };
  for (const auto& o : origins) {
    on_path = {o.predicate};
    visit(visit, o.predicate);
  }
  if (saturated) {
    for (auto& [pred, n] : table.counts_) n = kUnbounded;
  }
  return table;
}

std::size_t MarkerTable::expected_children(const std::string& predicate) const {
  auto it = counts_.find(predicate);
  return it == counts_.end() ? 0 : it->second;
}

SearchContext::SearchContext(KnowledgeBase kb, Query q, SearchOptions opts)
    : kb_(std::move(kb)), query_(std::move(q)), opts_(opts) {
  hypothesis_ = to_ground_rv(query_.hypothesis);
  for (const auto& e : query_.evidence) {
    GroundRV rv = to_ground_rv(e.variable);
    const std::size_t idx = rv.outcome_index(e.outcome);
    evidence_.emplace(std::move(rv), idx);
  }
  markers_ = MarkerTable::build(kb_, query_);
}

std::optional<std::size_t> SearchContext::observed(const GroundRV& rv) const {
  auto it = evidence_.find(rv);
  if (it == evidence_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

SearchState init_state(const SearchContext& ctx) {
  SearchState s;
  s.subgoals.push_back({ctx.query().hypothesis, {}});
  std::set<GroundRV> seen{ctx.hypothesis()};
  for (const auto& e : ctx.query().evidence) {
    if (seen.insert(to_ground_rv(e.variable)).second) s.subgoals.push_back({e.variable, {}});
  }
  return s;
}

Expansion op_find_prob_dependency(const SearchContext& ctx, const SearchState& s, std::size_t i) {
  const SubGoal& g = subgoal_at(s, i);
  const auto* alt = std::get_if<AltAtom>(&g.formula);
  Expansion out;
  if (!alt) return out;
  const AltAtom goal = s.theta.apply(*alt);
  if (!goal.ground() || !graph_matches(s, goal).empty()) return out;

  struct Candidate {
    ProbDependency statement;
    Substitution theta;
  };
  std::vector<Candidate> candidates;
  const std::string tag = "d" + std::to_string(s.renames);
  for (const auto& dep : ctx.kb().dependencies) {
    if (dep.head.predicate != goal.predicate) continue;
    ProbDependency r = rename_apart(dep, tag);
    if (auto th = unify(goal, r.head, s.theta)) candidates.push_back({std::move(r), std::move(*th)});
  }
  if (ctx.options().strict && candidates.size() > 1) {
    throw Error(ErrorKind::Ambiguous, std::to_string(candidates.size()) +
                                          " dependency statements apply to " + describe_subgoal(s, g));
  }

  for (std::size_t b = 0; b < candidates.size(); ++b) {
    const auto& [dep, theta] = candidates[b];
    const GroundRV head = to_ground_rv(theta.apply(dep.head));
    std::vector<GroundRV> parents;
    bool usable = true;
    for (const AltAtom* p : dep.parents()) {
      const AltAtom pa = theta.apply(*p);
      if (!pa.ground()) {
        usable = false;  // statement leaves a parent underdetermined
        break;
      }
      parents.push_back(to_ground_rv(pa));
    }
    std::set<GroundRV> distinct(parents.begin(), parents.end());
    distinct.insert(head);
    if (!usable || distinct.size() != parents.size() + 1) continue;

    SearchState ns = without_subgoal(s, i, construction(ActionKind::FindProbDependency, i, b));
    ns.theta = theta;
    ++ns.renames;
    Factor f = cpt_factor(dep, head, parents);
    if (auto obs = ctx.observed(head)) f = condition(f, head, *obs);
    const NodeId id = ns.graph.add_node(head, std::move(f));
    for (NodeId child : g.pending_children) ns.graph.add_edge(id, child);
    for (const auto& p : parents) ++ns.children_found[p];
    for (const auto& atom : dep.body) {
      if (const auto* pa = std::get_if<AltAtom>(&atom)) {
        ns.subgoals.push_back({theta.apply(*pa), {id}});
      } else {
        ns.subgoals.push_back({theta.apply(std::get<Atom>(atom)), {}});
      }
    }
    out.successors.push_back(std::move(ns));
  }
  return out;
}

Expansion op_prove_goal(const SearchContext& ctx, const SearchState& s, std::size_t i) {
  const SubGoal& g = subgoal_at(s, i);
  const auto* atom = std::get_if<Atom>(&g.formula);
  Expansion out;
  if (!atom) return out;
  ProveOptions opts;
  opts.depth_bound = ctx.options().depth_bound;
  opts.rename_tag = "g" + std::to_string(s.renames);
  ProofResult proof = prove(s.theta.apply(*atom), s.theta, ctx.kb(), opts);
  out.depth_exceeded = proof.depth_exceeded;
  for (std::size_t b = 0; b < proof.answers.size(); ++b) {
    SearchState ns = without_subgoal(s, i, construction(ActionKind::ProveGoal, i, b));
    ns.theta = std::move(proof.answers[b]);
    ++ns.renames;
    out.successors.push_back(std::move(ns));
  }
  return out;
}

Expansion op_find_in_graph(const SearchContext&, const SearchState& s, std::size_t i) {
  const SubGoal& g = subgoal_at(s, i);
  const auto* alt = std::get_if<AltAtom>(&g.formula);
  Expansion out;
  if (!alt) return out;
  const auto matches = graph_matches(s, *alt);
  for (std::size_t b = 0; b < matches.size(); ++b) {
    const auto& [node, theta] = matches[b];
    SearchState ns = without_subgoal(s, i, construction(ActionKind::FindInGraph, i, b));
    ns.theta = theta;
    bool acyclic = true;
    for (NodeId child : g.pending_children) acyclic = acyclic && ns.graph.add_edge(node, child);
    if (acyclic) out.successors.push_back(std::move(ns));
  }
  return out;
}

GuardResult op_detect_marg_error(const SearchState& s, std::size_t i) {
  const SubGoal& g = subgoal_at(s, i);
  for (const auto& v : s.marginalized) {
    if (may_denote(s, g, v)) return GuardResult::Fail;
  }
  return GuardResult::Pass;
}

std::optional<std::size_t> find_marg_error(const SearchState& s) {
  if (s.marginalized.empty()) return std::nullopt;
  for (std::size_t i = 0; i < s.subgoals.size(); ++i) {
    if (op_detect_marg_error(s, i) == GuardResult::Fail) return i;
  }
  return std::nullopt;
}

bool settled(const SearchState& s, NodeId n) {
  n = s.graph.resolve(n);
  for (const auto& g : s.subgoals) {
    for (NodeId c : g.pending_children) {
      if (s.graph.resolve(c) == n) return false;
    }
  }
  return true;
}

bool can_multiply(const SearchState& s, NodeId a, NodeId b) {
  const PartialGraph& g = s.graph;
  a = g.resolve(a);
  b = g.resolve(b);
  if (!g.live(a) || !g.live(b) || a == b || !g.can_merge(a, b)) return false;
  std::set<NodeId> unsettled;
  for (const auto& sg : s.subgoals) {
    for (NodeId c : sg.pending_children) unsettled.insert(g.resolve(c));
  }
  if (unsettled.empty()) return true;
  for (NodeId u : unsettled) {
    if (g.reaches(u, a) || g.reaches(u, b)) return false;
  }
  return true;
}

SearchState op_multiply(const SearchContext&, const SearchState& s, NodeId a, NodeId b) {
  const NodeId x = s.graph.resolve(a);
  const NodeId y = s.graph.resolve(b);
  if (!can_multiply(s, x, y)) {
    throw Error(ErrorKind::Precondition, "multiply " + std::to_string(x) + "," + std::to_string(y) +
                                             ": not two distinct live nodes that can merge safely");
  }
  SearchState ns = s;
  ns.graph.merge(x, y);
  Action act;
  act.kind = ActionKind::Multiply;
  act.first = x;
  act.second = y;
  ns.trace.push_back(std::move(act));
  return ns;
}

SearchState op_margin(const SearchContext& ctx, const SearchState& s, const GroundRV& v) {
  if (v == ctx.hypothesis()) throw Error(ErrorKind::Precondition, "cannot sum out the query variable");
  if (is_pending(s, v)) throw Error(ErrorKind::Precondition, v.name() + " is still a subgoal");
  const auto holders = s.graph.nodes_with_dim(v);
  if (holders.size() != 1) {
    throw Error(ErrorKind::Precondition, v.name() + " appears in " + std::to_string(holders.size()) +
                                             " factors; margin needs exactly one");
  }
  const auto& dims = s.graph.nodes().at(holders.front()).factor.dims();
  const GroundRV dim = *std::find(dims.begin(), dims.end(), v);

  SearchState ns = s;
  ns.graph.sum_out(dim);
  ns.marginalized.insert(dim);
  Action act;
  act.kind = ActionKind::Margin;
  act.variable = dim;
  ns.trace.push_back(std::move(act));
  return ns;
}

bool margin_safe(const GroundRV& v, const SearchState& s, const MarkerTable& m) {
  if (s.subgoals.empty()) return true;
  auto it = s.children_found.find(v);
  const std::size_t found = it == s.children_found.end() ? 0 : it->second;
  return found >= m.expected_children(v.predicate);
}

bool is_pending(const SearchState& s, const GroundRV& v) {
  return std::any_of(s.subgoals.begin(), s.subgoals.end(),
                     [&](const SubGoal& g) { return may_denote(s, g, v); });
}

std::vector<GroundRV> eliminable(const SearchContext& ctx, const SearchState& s, bool margin_gate) {
  std::set<GroundRV> dims;
  for (const auto& [id, n] : s.graph.nodes()) dims.insert(n.factor.dims().begin(), n.factor.dims().end());
  std::vector<GroundRV> out;
  for (const auto& v : dims) {
    if (v == ctx.hypothesis() || is_pending(s, v)) continue;
    if (margin_gate && !margin_safe(v, s, ctx.markers())) continue;
    out.push_back(v);
  }
  return out;
}

bool is_terminal(const SearchContext& ctx, const SearchState& s) {
  if (!s.subgoals.empty() || s.graph.size() != 1) return false;
  const auto& dims = s.graph.nodes().begin()->second.factor.dims();
  return dims.size() == 1 && dims.front() == ctx.hypothesis();
}

std::vector<Action> construction_actions(const SearchState& s) {
  std::vector<Action> out;
  for (std::size_t i = 0; i < s.subgoals.size(); ++i) {
    const SubGoal& g = s.subgoals[i];
    if (const auto* alt = std::get_if<AltAtom>(&g.formula)) {
      if (!graph_matches(s, *alt).empty()) {
        out.push_back(construction(ActionKind::FindInGraph, i, 0));
      } else if (s.theta.apply(*alt).ground()) {
        out.push_back(construction(ActionKind::FindProbDependency, i, 0));
      }
    } else {
      out.push_back(construction(ActionKind::ProveGoal, i, 0));
    }
  }
  return out;
}

std::vector<Action> applicable_actions(const SearchContext& ctx, const SearchState& s, bool margin_gate) {
  std::vector<Action> out = construction_actions(s);

  for (const auto& v : eliminable(ctx, s, margin_gate)) {
    if (s.graph.nodes_with_dim(v).size() != 1) continue;
    Action a;
    a.kind = ActionKind::Margin;
    a.variable = v;
    out.push_back(std::move(a));
  }

  const auto& nodes = s.graph.nodes();
  for (auto i = nodes.begin(); i != nodes.end(); ++i) {
    for (auto j = std::next(i); j != nodes.end(); ++j) {
      const Factor& f = i->second.factor;
      const Factor& h = j->second.factor;
      bool related = f.dims().empty() || h.dims().empty();
      for (const auto& v : f.dims()) related = related || h.has(v);
      const auto ci = s.graph.children(i->first);
      const auto cj = s.graph.children(j->first);
      related = related || std::count(ci.begin(), ci.end(), j->first) ||
                std::count(cj.begin(), cj.end(), i->first);
      if (!related || !can_multiply(s, i->first, j->first)) continue;
      Action a;
      a.kind = ActionKind::Multiply;
      a.first = i->first;
      a.second = j->first;
      out.push_back(a);
    }
  }
  return out;
}

Expansion apply_action(const SearchContext& ctx, const SearchState& s, const Action& a) {
  switch (a.kind) {
    case ActionKind::FindProbDependency:
      return op_find_prob_dependency(ctx, s, a.subgoal);
    case ActionKind::ProveGoal:
      return op_prove_goal(ctx, s, a.subgoal);
    case ActionKind::FindInGraph:
      return op_find_in_graph(ctx, s, a.subgoal);
    case ActionKind::Multiply:
      return {{op_multiply(ctx, s, a.first, a.second)}, false};
    case ActionKind::Margin:
      return {{op_margin(ctx, s, a.variable)}, false};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown action");
}

SearchState replay_path(const SearchContext& ctx, const std::vector<Action>& path) {
  SearchState s = init_state(ctx);
  for (const auto& a : path) {
    Expansion e = apply_action(ctx, s, a);
    if (a.constructs()) {
      auto it = std::find_if(e.successors.begin(), e.successors.end(),
                             [&](const SearchState& n) { return n.trace.back().branch == a.branch; });
      if (it == e.successors.end()) {
        throw Error(ErrorKind::Precondition, std::string("replay: ") + action_name(a.kind) +
                                                 " has no branch " + std::to_string(a.branch));
      }
      s = std::move(*it);
    } else {
      s = std::move(e.successors.front());
    }
  }
  return s;
}

}  // namespace mce
