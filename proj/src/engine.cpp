#include "mce/engine.hpp"

#include <algorithm>

#include "mce/error.hpp"

namespace mce {

std::vector<TraceArg> trace_args(const SearchState& s, const Action& a) {
  switch (a.kind) {
    case ActionKind::Multiply:
      return {static_cast<long long>(a.first), static_cast<long long>(a.second)};
    case ActionKind::Margin:
      return {a.variable.name()};
    default:
      break;
  }
  std::vector<TraceArg> out{static_cast<long long>(a.subgoal)};
  if (a.subgoal < s.subgoals.size()) out.emplace_back(describe_subgoal(s, s.subgoals[a.subgoal]));
  return out;
}

namespace {

class Recorder {
 public:
  Recorder(const SearchContext& ctx, const RunOptions& opts, std::vector<TraceRecord>& out)
      : ctx_(ctx), opts_(opts), out_(out) {}

  void add(std::size_t step, std::string action, std::vector<TraceArg> args, const SearchState& s) {
    TraceRecord r;
    r.step = step;
    r.action = std::move(action);
    r.args = std::move(args);
    r.subgoals = s.subgoals.size();
    r.nodes = s.graph.size();
    if (opts_.score_mode) r.score = score(ctx_, s, *opts_.score_mode);
    if (opts_.observer) opts_.observer(r);
    out_.push_back(std::move(r));
  }

 private:
  const SearchContext& ctx_;
  const RunOptions& opts_;
  std::vector<TraceRecord>& out_;
};

bool has_statement_for(const SearchContext& ctx) {
  const auto& h = ctx.query().hypothesis;
  return std::any_of(ctx.kb().dependencies.begin(), ctx.kb().dependencies.end(), [&](const ProbDependency& d) {
    return unify(h, d.head, Substitution{}).has_value();
  });
}

}  // namespace

RunResult run_query(const SearchContext& ctx, Policy& policy, const RunOptions& opts) {
  if (!has_statement_for(ctx)) {
    throw Error(ErrorKind::Unanswerable,
                "no dependency statement for " + ctx.hypothesis().name());
  }

  RunResult result;
  Recorder rec(ctx, opts, result.trace);
  using StatePtr = std::shared_ptr<const SearchState>;
  std::vector<StatePtr> agenda{std::make_shared<const SearchState>(init_state(ctx))};
  rec.add(0, "init", {}, *agenda.back());

  bool depth_exceeded = false;
  std::size_t step = 0;
  while (!agenda.empty()) {
    const StatePtr top = agenda.back();
    const bool done = opts.construction_only ? top->subgoals.empty() : is_terminal(ctx, *top);
    if (done) {
      result.complete = true;
      break;
    }
    if (opts.max_steps && step >= *opts.max_steps) break;
    agenda.pop_back();
    ++step;

    if (auto bad = find_marg_error(*top)) {
      rec.add(step, "detect-marg-error",
              {static_cast<long long>(*bad), describe_subgoal(*top, top->subgoals[*bad])}, *top);
      ++result.dead_branches;
      continue;
    }
    const auto action = policy.choose(ctx, *top);
    if (!action) {
      rec.add(step, "dead-end", {}, *top);
      ++result.dead_branches;
      continue;
    }
    Expansion e = apply_action(ctx, *top, *action);
    depth_exceeded = depth_exceeded || e.depth_exceeded;
    auto args = trace_args(*top, *action);
    if (e.successors.empty()) {
      rec.add(step, action_name(action->kind), std::move(args), *top);
      ++result.dead_branches;
      continue;
    }
    for (auto it = e.successors.rbegin(); it != e.successors.rend(); ++it) {
      agenda.push_back(std::make_shared<const SearchState>(std::move(*it)));
    }
    rec.add(step, action_name(action->kind), std::move(args), *agenda.back());
  }
  result.steps = step;

  if (result.complete) {
    result.state = agenda.back();
    if (!opts.construction_only) {
      result.posterior = normalize(result.state->graph.nodes().begin()->second.factor);
    }
    return result;
  }
  if (!agenda.empty()) {
    result.state = agenda.back();  // out of budget
    return result;
  }
  if (depth_exceeded) {
    throw Error(ErrorKind::ResourceCap, "proof depth bound reached before any model was completed");
  }
  throw Error(ErrorKind::Unanswerable,
              "every model construction for " + ctx.hypothesis().name() + " failed");
}

Score final_score(const SearchContext& ctx, const RunResult& r, ScoreMode mode) {
  if (r.posterior) return exact_score(*r.posterior, mode);
  return score(ctx, *r.state, mode);
}

}  // namespace mce
